import itertools

import pytest
from hypothesis import given, strategies as st

from biconseq import InvariantError, PreconditionError, Semantics, all_valuations, c2
from biconseq.cases import h_example
from biconseq.consequence import SemanticConsequence
from biconseq.operators import TheoryPair
from biconseq import theories as th
from biconseq.theories import (
    all_ultrafilters,
    assertion_projection,
    c2_image,
    check_lattice,
    check_ultraproduct_closure,
    enumerate_theory_pairs,
    extend_fip_to_ultrafilter,
    has_fip,
    is_closed_set_pair,
    is_consistent_pair,
    is_ultrafilter,
    join,
    maximal_pairs,
    meet,
    ultrafilter_principal,
    ultraproduct,
)

from conftest import explicit, semantics


def toy_pairs(lang):
    p, pp = lang.bit("p"), lang.bit("p -> p")
    return p | pp, pp, p


def test_toy_space(toy):
    lang, V = toy
    assert len(V) == 2
    both, pp, p = toy_pairs(lang)
    space = enumerate_theory_pairs(SemanticConsequence(V))
    assert space.pairs == {
        TheoryPair(both, 0), TheoryPair(pp, p), TheoryPair(pp, 0), TheoryPair(lang.full, lang.full),
    }
    assert maximal_pairs(space) == {TheoryPair(both, 0), TheoryPair(pp, p)}


def test_degenerate_spaces():
    L2 = explicit("p", "q")
    empty = enumerate_theory_pairs(SemanticConsequence(Semantics(L2, [])))
    assert empty.pairs == {TheoryPair(L2.full, L2.full)}
    assert maximal_pairs(empty) == frozenset()
    v = L2.bit("p")
    single = enumerate_theory_pairs(SemanticConsequence(Semantics(L2, [v])))
    assert single.pairs == {TheoryPair(v, L2.bit("q")), TheoryPair(L2.full, L2.full)}


def test_partition_pairs_are_maximal():
    L1 = explicit("p")
    space = enumerate_theory_pairs(SemanticConsequence(all_valuations(L1)))
    assert maximal_pairs(space) == {TheoryPair(1, 0), TheoryPair(0, 1)}


def test_theory_cap():
    L3 = explicit("a", "b", "c")
    with pytest.raises(PreconditionError):
        enumerate_theory_pairs(SemanticConsequence(all_valuations(L3)), cap=4)


def test_meet_and_join_on_toy(toy):
    lang, V = toy
    rel = SemanticConsequence(V)
    both, pp, p = toy_pairs(lang)
    T = TheoryPair(lang.full, lang.full)
    a, b = TheoryPair(both, 0), TheoryPair(pp, p)
    assert meet(a, b) == (pp, 0)
    assert meet(T, a) == a and meet(a, a) == a
    assert join(a, b, rel) == T
    bottom = TheoryPair(pp, 0)
    assert join(a, bottom, rel) == a and join(a, a, rel) == a


@given(semantics())
def test_space_is_the_closure_image(V):
    rel = SemanticConsequence(V)
    space = enumerate_theory_pairs(rel)
    assert space.pairs == c2_image(rel)
    assert check_lattice(space).ok
    full = V.lang.full
    assert maximal_pairs(space) == {TheoryPair(v, full & ~v) for v in V}
    for g1 in range(full + 1):
        for g0 in range(full + 1):
            assert is_closed_set_pair(rel, g1, g0) == ((g1, g0) in space)


def test_closed_set_pairs_on_toy(toy):
    lang, V = toy
    rel = SemanticConsequence(V)
    assert not is_closed_set_pair(rel, lang.bit("p"), 0)
    assert is_closed_set_pair(rel, lang.full, lang.full)
    assert is_closed_set_pair(rel, *c2(rel, lang.bit("p"), 0))


def test_consistency_examples(imp1):
    h = h_example(3)
    lang = h.language
    res = is_consistent_pair(h.rel, 0, lang.bit("H"))
    assert res.consistent
    assert res.witness == lang.parse_set("0, 1, 2")
    L2 = explicit("p", "q")
    rel = SemanticConsequence(all_valuations(L2))
    assert not is_consistent_pair(rel, L2.bit("p"), L2.bit("p")).consistent
    ilang, V = imp1
    assert not is_consistent_pair(SemanticConsequence(V), ilang.parse_set("p, p -> q"), ilang.bit("q")).consistent


def test_lemma_disagreement_is_an_invariant_error(monkeypatch):
    L2 = explicit("p", "q")
    rel = SemanticConsequence(all_valuations(L2))
    monkeypatch.setattr(th, "c2", lambda r, a, b: TheoryPair(L2.full, L2.full))
    with pytest.raises(InvariantError):
        is_consistent_pair(rel, 0, 0)


@given(semantics())
def test_lemma_agrees_everywhere(V):
    rel = SemanticConsequence(V)
    for g1 in range(V.lang.full + 1):
        for g0 in range(V.lang.full + 1):
            is_consistent_pair(rel, g1, g0)


def test_top_added_changes_space_but_not_assertions():
    L2 = explicit("p", "q")
    V = Semantics(L2, [L2.bit("p"), L2.bit("q")])
    star = Semantics(L2, [L2.bit("p"), L2.bit("q"), L2.full])
    a = enumerate_theory_pairs(SemanticConsequence(V))
    b = enumerate_theory_pairs(SemanticConsequence(star))
    assert a.pairs != b.pairs
    assert assertion_projection(a) == assertion_projection(b)


def test_principal_ultrafilters():
    U = ultrafilter_principal([1, 2, 3], 2)
    assert U.generator == 2
    assert {2} in U and {1, 3} not in U
    assert is_ultrafilter([1, 2, 3], U.members())
    assert len(U.members()) == 4
    (only,) = all_ultrafilters([7])
    assert only == {frozenset({7})}
    with pytest.raises(PreconditionError):
        ultrafilter_principal([1, 2], 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_ultrafilter_is_principal(n):
    I = tuple(range(n))
    found = all_ultrafilters(I)
    assert set(found) == {frozenset(ultrafilter_principal(I, i).members()) for i in I}


def test_is_ultrafilter_rejects_non_examples():
    I = (1, 2, 3)
    assert not is_ultrafilter(I, [])
    assert not is_ultrafilter(I, [{1, 2, 3}])
    assert not is_ultrafilter(I, [set(), {1}, {1, 2}, {1, 3}, {1, 2, 3}])


def test_extend_fip():
    assert extend_fip_to_ultrafilter([{1, 2}, {2, 3}], [1, 2, 3]).generator == 2
    assert extend_fip_to_ultrafilter([], [1, 2, 3]).generator == 1
    with pytest.raises(PreconditionError, match="offending subfamily"):
        extend_fip_to_ultrafilter([{1}, {2}, {1, 2}], [1, 2, 3])
    ok, bad = has_fip([{1}, {1, 2}, {2}], [1, 2])
    assert not ok and set(map(frozenset, bad)) == {frozenset({1}), frozenset({2})}


def test_extend_fip_contains_the_family():
    I = ("x", "y", "z")
    W = [{"x", "y", "z"}, {"y", "z"}]
    U = extend_fip_to_ultrafilter(W, I)
    assert all(X in U for X in W)


def test_ultraproduct_basics(toy):
    lang, V = toy
    both, pp, p = toy_pairs(lang)
    fam = [TheoryPair(both, 0), TheoryPair(pp, p), TheoryPair(pp, 0)]
    for i in range(3):
        assert ultraproduct(fam, ultrafilter_principal(range(3), i), lang) == fam[i]
    const = [TheoryPair(pp, p)] * 3
    assert ultraproduct(const, ultrafilter_principal(range(3), 1), lang) == (pp, p)
    with pytest.raises(PreconditionError):
        ultraproduct(fam, ultrafilter_principal(range(2), 0), lang)
    keyed = {"a": fam[0], "b": fam[1]}
    assert ultraproduct(keyed, ultrafilter_principal("ab", "b"), lang) == fam[1]


@given(semantics(max_n=2), st.data())
def test_ultraproduct_preserves_consistency(V, data):
    rel = SemanticConsequence(V)
    space = enumerate_theory_pairs(rel)
    consistent = [x for x in space if x != (V.lang.full, V.lang.full)]
    if not consistent:
        return
    fam = data.draw(st.lists(st.sampled_from(consistent), min_size=1, max_size=4))
    i = data.draw(st.integers(0, len(fam) - 1))
    out = ultraproduct(fam, ultrafilter_principal(range(len(fam)), i), V.lang)
    assert out in space
    assert is_consistent_pair(rel, *out).consistent


def test_ultraproduct_closure_report_on_toy(toy):
    lang, V = toy
    rep = check_ultraproduct_closure(SemanticConsequence(V), max_index=4)
    assert rep.ok, rep.to_text()
    assert any("not reproducible" in n for n in rep.notes)


def test_ultraproduct_closure_report_top_only():
    L2 = explicit("p", "q")
    rep = check_ultraproduct_closure(SemanticConsequence(Semantics(L2, [])), max_index=3)
    assert rep.ok
