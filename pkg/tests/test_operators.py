import numpy as np
import pytest
from hypothesis import given

from biconseq import PreconditionError, Semantics, all_valuations, c2
from biconseq.cases import exists_probe, h_example, implication_probe
from biconseq.consequence import SemanticConsequence, assertion_T, t_closure
from biconseq.operators import (
    TabulatedOperator,
    TheoryPair,
    c2_by_models,
    c_assert_mod_denied,
    c_deny_mod_asserted,
    check_c2_axioms,
    check_finitariness,
    check_prop1,
    check_prop3,
    is_operator,
    operator_of,
    s_conseq_from_operator,
    SWEEP_LIMIT,
)

from conftest import explicit, semantics


def test_assert_mod_denied_q(imp1):
    lang, V = imp1
    rel = SemanticConsequence(V)
    got = c_assert_mod_denied(rel, lang.bit("q"), 0)
    assert got == lang.parse_set("p -> p, q -> p, q -> q")


@given(semantics())
def test_empty_context_is_assertion_closure(V):
    rel = SemanticConsequence(V)
    T = assertion_T(rel)
    for g in range(V.lang.full + 1):
        assert c_assert_mod_denied(rel, 0, g) == t_closure(T, g)


def test_inconsistent_context_gives_everything(imp1):
    lang, V = imp1
    rel = SemanticConsequence(V)
    g1 = lang.parse_set("p, p -> q")
    assert rel.holds(g1, lang.bit("q"))
    assert c_assert_mod_denied(rel, lang.bit("q"), g1) == lang.full


def test_deny_mod_asserted_examples():
    h = h_example(3)
    lang = h.language
    assert c_deny_mod_asserted(h.rel, 0, lang.bit("H")) == lang.bit("H")
    L2 = explicit("p", "q")
    free = SemanticConsequence(all_valuations(L2))
    assert c_deny_mod_asserted(free, 0, 0) == 0
    assert c_deny_mod_asserted(free, 0, L2.bit("q")) & L2.bit("q")


def test_c2_on_h_example():
    h = h_example(3)
    lang = h.language
    assert c2(h.rel, 0, lang.bit("H")) == (lang.parse_set("0, 1, 2"), lang.bit("H"))
    assert c2(h.rel, lang.bit("0"), 0) == (lang.bit("0"), 0)
    assert c2(h.rel, lang.parse_set("0, 1"), 0) == (lang.parse_set("0, 1"), 0)


@given(semantics())
def test_overlap_collapses(V):
    full = V.lang.full
    rel = SemanticConsequence(V)
    for g1 in range(full + 1):
        for g0 in range(full + 1):
            r = c2(rel, g1, g0)
            if g1 & g0:
                assert r == (full, full)
            assert r == c2_by_models(rel, g1, g0)


@given(semantics(max_n=2))
def test_prop1_holds(V):
    assert check_prop1(SemanticConsequence(V)).ok


def test_prop1_on_implication(imp1):
    lang, V = imp1
    rel = SemanticConsequence(V)
    rep = check_prop1(rel)
    assert rep.ok
    full = lang.full
    for v in V:
        co = full & ~v
        assert c_assert_mod_denied(rel, co, v) == v and c_deny_mod_asserted(rel, v, co) == co
    om = lang.bit("q")
    co = full & ~om
    assert c_assert_mod_denied(rel, co, om) == full and c_deny_mod_asserted(rel, om, co) == full


@given(semantics())
def test_prop3_holds(V):
    assert check_prop3(SemanticConsequence(V)).ok


@given(semantics())
def test_c2_axioms_hold_for_relations(V):
    rep = check_c2_axioms(operator_of(SemanticConsequence(V)))
    assert rep.ok, rep.to_text()


@given(semantics())
def test_operator_round_trip(V):
    rel = SemanticConsequence(V)
    op = operator_of(rel)
    back = s_conseq_from_operator(op)
    assert np.array_equal(back.table(), rel.table())
    assert operator_of(back) == op


def test_identity_operator_breaks_s_co3():
    L2 = explicit("p", "q")
    ident = TabulatedOperator.from_function(L2, lambda a, b: (a, b))
    rep = check_c2_axioms(ident)
    assert rep["V"].ok
    assert rep["S-CO3"].status == "fail" and rep["T"].status == "fail"
    assert rep["S-CO3"].counterexample == {"asserted": ["p"], "denied": ["p"]}
    assert rep["axioms<->V+T"].ok
    with pytest.raises(PreconditionError):
        s_conseq_from_operator(ident)


def test_identity_operator_on_one_sentence_is_fine():
    L1 = explicit("p")
    assert check_c2_axioms(TabulatedOperator.from_function(L1, lambda a, b: (a, b))).ok


def test_constant_top_operator():
    L2 = explicit("p", "q")
    op = TabulatedOperator.from_function(L2, lambda a, b: (L2.full, L2.full))
    assert check_c2_axioms(op).ok
    rel = s_conseq_from_operator(op)
    assert rel.table().all()


def test_recovers_modus_ponens(imp1):
    lang, V = imp1
    op = operator_of(SemanticConsequence(V), SWEEP_LIMIT)
    pi, sigma = lang.parse_set("p, p -> q"), lang.bit("q")
    assert op(pi, sigma) == (lang.full, lang.full)
    assert s_conseq_from_operator(op).holds(pi, sigma)


def _scramble(lang, seed):
    rng = np.random.default_rng(seed)
    size = 1 << lang.n
    t1 = rng.integers(0, size, (size, size))
    t0 = rng.integers(0, size, (size, size))
    return TabulatedOperator(lang, t1, t0)


@pytest.mark.parametrize("seed", range(40))
def test_axioms_and_characterization_agree_on_arbitrary_maps(seed):
    lang = explicit("p", "q")
    rep = check_c2_axioms(_scramble(lang, seed))
    assert rep["axioms<->V+T"].ok
    assert rep["S-CO2 from S-CO0,S-CO1,S-CO3"].ok


def test_tabulation_limit():
    with pytest.raises(PreconditionError):
        operator_of(SemanticConsequence(all_valuations(explicit("a", "b", "c", "d"))))


def test_exists_family_is_non_finitary_trend():
    rep = check_finitariness(exists_probe, range(2, 7))
    assert rep["s_denied_witness_by_N"] == [2, 3, 4, 5, 6]
    assert rep["s_trend"] == "non-finitary trend"
    assert max(rep["t_premise_witness_by_N"]) <= 1
    assert rep["t_trend"] == "bounded"
    assert all(r["context_union"] for r in rep["rows"] if r["kind"] == "S")


def test_implication_family_is_bounded():
    rep = check_finitariness(implication_probe, [2, 3, 4])
    assert rep["s_trend"] == "bounded" and rep["t_trend"] == "bounded"
    assert rep["s_denied_witness_by_N"] == [1, 1, 1]
    assert rep["t_premise_witness_by_N"] == [2, 2, 2]
