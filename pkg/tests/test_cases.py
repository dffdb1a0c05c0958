import pytest

from biconseq import PreconditionError, c2, t_closure
from biconseq.cases import (
    CASES,
    boolean_value,
    build_case,
    cpl_disjunction,
    cpl_implication,
    exists_example,
    h_example,
    q_denied_theory,
)
from biconseq.consequence import SemanticT, min_counterpart_holds, assertion_T
from biconseq.semantics import conj_combination


def failing(case):
    return [r for r in case.evaluate() if r["status"] != "pass"]


def test_implication_case():
    case = cpl_implication(["p", "q"], 1)
    assert len(case.semantics) == 4
    assert not failing(case)
    assert len(case.expected) >= 4


def test_implication_case_depth_two():
    case = cpl_implication(["p", "q"], 2)
    assert case.language.n == 38 and len(case.semantics) == 4
    assert not failing(case)


def test_disjunction_case():
    case = cpl_disjunction(["p", "q"], 1)
    assert not failing(case)
    lang = case.language
    d = lang.bit("p | q")
    assert case.rel.holds(d, lang.parse_set("p, q"))
    assert not min_counterpart_holds(assertion_T(case.rel), (d, lang.parse_set("p, q")))
    assert case.rel.holds(lang.bit("p"), d)


@pytest.mark.parametrize("N", range(1, 7))
def test_h_example(N):
    case = h_example(N)
    assert not failing(case)
    assert case.language.n == N + 1


def test_h_example_counts_and_closures():
    case = h_example(3)
    lang = case.language
    assert len(case.semantics) == 16 - 7
    assert c2(case.rel, 0, lang.bit("H")) == (lang.parse_set("0, 1, 2"), lang.bit("H"))
    assert c2(case.rel, lang.parse_set("0, 1"), 0) == (lang.parse_set("0, 1"), 0)


@pytest.mark.parametrize("N", range(2, 7))
def test_exists_example(N):
    case = exists_example(N)
    assert not failing(case)
    assert len(case.semantics) == (1 << (N + 1)) - 1


def test_exists_example_specifics():
    case = exists_example(3)
    lang = case.language
    e = lang.bit("E")
    assert case.rel.holds(e, lang.parse_set("0, 1, 2"))
    assert not case.rel.holds(e, lang.parse_set("0, 1"))
    singles = [e | lang.bit(str(n)) for n in range(3)]
    assert all(v in case.semantics for v in singles)
    assert conj_combination(singles, lang) == e
    assert e not in case.semantics


def test_q_denied_small():
    case = q_denied_theory(["p", "q"], 1)
    assert not failing(case)
    lang = case.language
    T1, T0 = c2(case.rel, 0, lang.bit("q"))
    assert T1 == lang.parse_set("p -> p, q -> p, q -> q")
    assert T0 == lang.bit("q")
    assert len(case.expected) == 3


def test_q_denied_separation_example():
    case = q_denied_theory(["p", "q", "r"], 1)
    lang = case.language
    v = boolean_value(lang, {"p": True, "q": True, "r": False})
    assert v in case.semantics
    psi = lang.bit("q -> p")
    assert psi & ~v == 0
    assert not v & lang.bit("q -> r")
    T1, _ = c2(case.rel, 0, lang.bit("q"))
    assert t_closure(SemanticT(case.semantics), psi) != T1


def test_q_denied_sampled_separations():
    case = q_denied_theory(["p", "q", "r"], 2, samples=20)
    results = case.evaluate()
    assert not failing(case)
    (sep,) = [r for r in results if "separated" in r["name"]]
    assert len(sep["detail"]) == 20


def test_q_denied_requires_q():
    with pytest.raises(PreconditionError):
        q_denied_theory(["p", "r"], 1)


def test_build_case():
    assert set(CASES) == {"cpl_implication", "cpl_disjunction", "h_example",
                          "exists_example", "q_denied_theory"}
    case = build_case("h_example", {"N": "2"})
    assert case.params["N"] == 2
    case = build_case("cpl_implication", {"atoms": "p,q", "depth": "1"})
    assert case.language.n == 6
    with pytest.raises(PreconditionError):
        build_case("nope")
    with pytest.raises(PreconditionError):
        build_case("h_example", {"N": "three"})
    with pytest.raises(PreconditionError):
        build_case("h_example", {"K": "3"})
