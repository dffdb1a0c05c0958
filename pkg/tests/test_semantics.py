import itertools

import pytest
from hypothesis import given

from biconseq import CapExceeded, Semantics, all_valuations, conj_closure, val_of
from biconseq.cases import boolean_semantics
from biconseq.consequence import Compatibility, SemanticConsequence, SemanticT, assertion_T
from biconseq.semantics import (
    bitstring_to_valuation,
    conj_combination,
    determined_compat,
    respects,
    semantics_compat,
)

from conftest import explicit, lang_n, semantics

L2 = explicit("p", "q")
P, Q = L2.bit("p"), L2.bit("q")
SPLIT = Semantics(L2, [P, Q])


@pytest.mark.parametrize("n, count", [(1, 2), (2, 4), (3, 8)])
def test_all_valuations_size(n, count):
    assert len(all_valuations(lang_n(n))) == count


def test_all_valuations_single_sentence():
    assert set(all_valuations(lang_n(1))) == {0, 1}


def test_all_valuations_respects_cap():
    with pytest.raises(CapExceeded):
        all_valuations(lang_n(3), cap=2)


def test_determined_compat():
    assert determined_compat(P, (P, Q))
    assert not determined_compat(P, (Q, 0))
    assert not determined_compat(P, (P, P))


def test_semantics_compat(imp1):
    lang, V = imp1
    assert not semantics_compat(V, (lang.parse_set("p, p -> q"), lang.parse_set("q")))
    assert not semantics_compat(Semantics(L2, []), (P, Q))
    assert semantics_compat(all_valuations(L2), (P, Q))


def test_conj_combination():
    assert conj_combination([P, Q], L2) == 0
    assert conj_combination([P], L2) == P
    assert conj_combination([], L2) == L2.full


def test_conj_closure_of_split_semantics():
    assert conj_closure(SPLIT) == Semantics(L2, [P, Q, 0, L2.full])


def test_conj_closure_fixpoint_and_empty():
    closed = Semantics(L2, [0, P, L2.full])
    assert conj_closure(closed) == closed
    assert conj_closure(Semantics(L2, [])) == Semantics(L2, [L2.full])


@given(semantics())
def test_conj_closure_is_a_closure_operator(V):
    C = conj_closure(V)
    assert V <= C
    assert conj_closure(C) == C
    assert V.lang.full in C
    for a, b in itertools.combinations(C, 2):
        assert a & b in C


@given(semantics(max_n=2), semantics(max_n=2))
def test_conj_closure_is_monotone(V, W):
    if V.lang is not W.lang:
        return
    U = V | W
    assert conj_closure(V) <= conj_closure(U)


def test_respects_own_compatibility():
    for v in range(4):
        assert respects(v, Compatibility.from_semantics(Semantics(L2, [v])))


@given(semantics())
def test_top_respects_every_t_relation(V):
    assert respects(V.lang.full, SemanticT(V))
    assert respects(V.lang.full, SemanticT(V), exhaustive=True)


def test_respects_fails_on_broken_consecution(imp1):
    lang, V = imp1
    rel = SemanticConsequence(V)
    v = lang.bit("q")  # q asserted, p -> q denied
    assert rel.holds(lang.bit("q"), lang.bit("p -> q"))
    assert not respects(v, rel)


def test_val_of_examples():
    V = Semantics(L2, [P])
    assert V <= val_of(SemanticConsequence(V))
    total = Compatibility(L2, __import__("numpy").zeros((4, 4), bool)).complement()
    assert len(val_of(total)) == 0
    assert val_of(SemanticConsequence(all_valuations(L2))) == all_valuations(L2)


def test_val_of_respects_cap():
    with pytest.raises(CapExceeded):
        val_of(SemanticConsequence(all_valuations(L2)), cap=1)


def test_absoluteness_exhaustive_two_sentences():
    for k in range(5):
        for vals in itertools.combinations(range(4), k):
            V = Semantics(L2, vals)
            assert val_of(SemanticConsequence(V)) == V
            assert val_of(Compatibility.from_semantics(V)) == V
            assert val_of(SemanticT(V)) == conj_closure(V)
            assert val_of(assertion_T(SemanticConsequence(V))) == conj_closure(V)


@given(semantics(min_n=3, max_n=3))
def test_absoluteness_three_sentences(V):
    assert val_of(SemanticConsequence(V)) == V
    assert val_of(Compatibility.from_semantics(V)) == V
    assert val_of(SemanticT(V)) == conj_closure(V)


def test_t_absoluteness_fails_on_split_semantics():
    got = val_of(SemanticT(SPLIT))
    assert got == Semantics(L2, [P, Q, 0, L2.full])
    assert SPLIT < got


@given(semantics())
def test_galois_connection(V):
    rel = SemanticConsequence(V)
    W = val_of(rel)
    # (G2)/(G3) with completeness: the relation of Val(rel) is rel itself
    assert SemanticConsequence(W).same_as(rel)


def test_semantics_file_round_trip(imp1):
    lang, V = imp1
    text = V.to_text("lang.txt")
    assert text.splitlines()[0] == "@lang lang.txt"
    assert Semantics.from_text(text, lang) == V
    assert Semantics.header_ref(text) == "lang.txt"


def test_bitstring_order():
    assert bitstring_to_valuation("10") == P
    assert SPLIT.bitstring(Q) == "01"


def test_semantics_collapses_duplicates():
    assert len(Semantics(L2, [P, P, Q])) == 2
