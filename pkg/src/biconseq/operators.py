"""The bilateral closure on (asserted, denied) pairs and its executable laws.

For an S-relation ``rel``:

* ``c_assert_mod_denied(rel, sigma, g1)`` = {A : g1 |- sigma + A}, the theorems
  of g1 in the context of the denials ``sigma``;
* ``c_deny_mod_asserted(rel, pi, g0)`` = {A : A + pi |- g0}, the
  anti-theorems of g0 in the context of the assertions ``pi``;
* ``c2(rel, g1, g0)`` pairs the two, each side using the other as context.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

import numpy as np

from biconseq.bits import bits_of, submasks
from biconseq.consequence import (
    ExtensionalConsequence,
    SConsequence,
    SemanticConsequence,
    witness_sizes,
)
from biconseq.errors import PreconditionError
from biconseq.report import Report
from biconseq.sentences import Language

TABULATE_LIMIT = 3
# proposition sweeps stay affordable a little further out
SWEEP_LIMIT = 6


class TheoryPair(NamedTuple):
    theorems: int
    antitheorems: int

    def __le__(self, other) -> bool:
        return self.theorems & ~other.theorems == 0 and self.antitheorems & ~other.antitheorems == 0

    def meet(self, other: TheoryPair) -> TheoryPair:
        return TheoryPair(self.theorems & other.theorems, self.antitheorems & other.antitheorems)

    def union(self, other: TheoryPair) -> TheoryPair:
        return TheoryPair(self.theorems | other.theorems, self.antitheorems | other.antitheorems)

    def to_dict(self, lang: Language) -> dict:
        return {"theorems": lang.names(self.theorems), "antitheorems": lang.names(self.antitheorems)}


def top(lang: Language) -> TheoryPair:
    return TheoryPair(lang.full, lang.full)


def c_assert_mod_denied(rel: SConsequence, sigma: int, gamma1: int) -> int:
    out = 0
    for a in range(rel.lang.n):
        if rel.holds(gamma1, sigma | (1 << a)):
            out |= 1 << a
    return out


def c_deny_mod_asserted(rel: SConsequence, pi: int, gamma0: int) -> int:
    out = 0
    for a in range(rel.lang.n):
        if rel.holds(pi | (1 << a), gamma0):
            out |= 1 << a
    return out


def c2(rel: SConsequence, gamma1: int, gamma0: int) -> TheoryPair:
    return TheoryPair(c_assert_mod_denied(rel, gamma0, gamma1), c_deny_mod_asserted(rel, gamma1, gamma0))


def c2_by_models(rel: SemanticConsequence, gamma1: int, gamma0: int) -> TheoryPair:
    """Intersection of the model pairs extending (gamma1, gamma0); (L, L) if none."""
    lang = rel.lang
    t1 = t0 = lang.full
    for v in rel.semantics.valuations:
        if gamma1 & ~v == 0 and gamma0 & v == 0:
            t1 &= v
            t0 &= lang.full & ~v
    return TheoryPair(t1, t0)


def _partition_pairs(lang: Language, p: int, s: int) -> Iterable[int]:
    """Every Omega with p <= Omega and s <= complement(Omega)."""
    if p & s:
        return
    free = lang.full & ~(p | s)
    for extra in submasks(free):
        yield p | extra


# -- tabulated operators -------------------------------------------------------


@dataclass
class TabulatedOperator:
    """A map on pairs of sentence sets, stored for every input pair."""

    lang: Language
    t1: np.ndarray
    t0: np.ndarray

    def __call__(self, gamma1: int, gamma0: int) -> TheoryPair:
        return TheoryPair(int(self.t1[gamma1, gamma0]), int(self.t0[gamma1, gamma0]))

    @classmethod
    def from_function(cls, lang: Language, fn: Callable[[int, int], tuple[int, int]],
                      limit: int = TABULATE_LIMIT) -> TabulatedOperator:
        if lang.n > limit:
            raise PreconditionError(f"tabulated operators need |L| <= {limit}, got {lang.n}")
        size = 1 << lang.n
        t1 = np.zeros((size, size), dtype=np.int64)
        t0 = np.zeros((size, size), dtype=np.int64)
        for g1 in range(size):
            for g0 in range(size):
                t1[g1, g0], t0[g1, g0] = fn(g1, g0)
        return cls(lang, t1, t0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TabulatedOperator)
            and self.lang == other.lang
            and np.array_equal(self.t1, other.t1)
            and np.array_equal(self.t0, other.t0)
        )


def operator_of(rel: SConsequence, limit: int = TABULATE_LIMIT) -> TabulatedOperator:
    return TabulatedOperator.from_function(rel.lang, lambda g1, g0: c2(rel, g1, g0), limit)


# -- Proposition-style checkers ---------------------------------------------------


def _pairs_repr(lang: Language, **sets: int) -> dict:
    return {k: lang.names(int(v)) for k, v in sets.items()}


def check_prop1(rel: SConsequence, lang: Language | None = None) -> Report:
    """Items (1)-(6) for the contextual operators, exhaustively over all sets."""
    lang = lang if lang is not None else rel.lang
    if lang.n > SWEEP_LIMIT:
        raise PreconditionError(f"exhaustive sweep needs |L| <= {SWEEP_LIMIT}")
    full, size = lang.full, 1 << lang.n
    # CA[ctx][g]: theorems of g modulo denials ctx; CD[ctx][g]: anti-theorems modulo assertions ctx
    CA = [[c_assert_mod_denied(rel, s, g) for g in range(size)] for s in range(size)]
    CD = [[c_deny_mod_asserted(rel, p, g) for g in range(size)] for p in range(size)]
    rep = Report("contextual operator properties")

    def operator_failure(C, name):
        for ctx in range(size):
            row = C[ctx]
            for g in range(size):
                if g & ~row[g]:
                    return {"operator": name, "law": "extensive", **_pairs_repr(lang, context=ctx, input=g)}
                if row[row[g]] & ~row[g]:
                    return {"operator": name, "law": "idempotent", **_pairs_repr(lang, context=ctx, input=g)}
                for i in range(lang.n):
                    if row[g] & ~row[g | 1 << i]:
                        return {"operator": name, "law": "monotone",
                                **_pairs_repr(lang, context=ctx, input=g, added=1 << i)}
        return None

    bad = operator_failure(CA, "assert") or operator_failure(CD, "deny")
    rep.add("1", bad is None, bad)

    bad = None
    for C, name in ((CA, "assert"), (CD, "deny")):
        for ctx in range(size):
            for i in range(lang.n):
                bigger = ctx | 1 << i
                for g in range(size):
                    if C[ctx][g] & ~C[bigger][g]:
                        bad = {"operator": name, **_pairs_repr(lang, context=ctx, larger=bigger, input=g)}
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    rep.add("2", bad is None, bad)

    bad = None
    for om in range(size):
        co = full & ~om
        fixed = CA[co][om] == om and CD[om][co] == co
        collapsed = CA[co][om] == full and CD[om][co] == full
        if not (fixed or collapsed):
            bad = _pairs_repr(lang, omega=om, theorems=CA[co][om], antitheorems=CD[om][co])
            break
    rep.add("3", bad is None, bad)

    bad = None
    for p in range(size):
        for s in range(size):
            ia = id_ = full
            for om in _partition_pairs(lang, p, s):
                ia &= CA[full & ~om][om]
                id_ &= CD[om][full & ~om]
            if CA[s][p] != ia or CD[p][s] != id_:
                bad = _pairs_repr(lang, asserted=p, denied=s)
                break
        if bad:
            break
    rep.add("4", bad is None, bad)

    bad = None
    for p in range(size):
        for s in range(size):
            s2 = CD[p][s]
            p2 = CA[s][p]
            # pointwise at the axioms: the whole-function reading fails off-point
            if CA[s][p] != CA[s2][p] or CD[p][s] != CD[p2][s]:
                bad = _pairs_repr(lang, asserted=p, denied=s)
                break
        if bad:
            break
    rep.add("5", bad is None, bad)

    bad = None
    for p in range(size):
        for s in range(size):
            t1, t0 = CA[s][p], CD[p][s]
            if t1 & t0 and not (t1 == full and t0 == full):
                bad = _pairs_repr(lang, asserted=p, denied=s)
                break
        if bad:
            break
    rep.add("6", bad is None, bad)
    return rep


def check_prop3(rel: SConsequence, lang: Language | None = None) -> Report:
    """Closure laws, the intersection form, and the fixed-or-collapse dichotomy for c2."""
    lang = lang if lang is not None else rel.lang
    op = operator_of(rel, SWEEP_LIMIT)
    size, full = 1 << lang.n, lang.full
    T = top(lang)
    rep = Report("bilateral closure properties")

    bad = None
    for g1 in range(size):
        for g0 in range(size):
            x = TheoryPair(g1, g0)
            cx = op(g1, g0)
            if not x <= cx:
                bad = {"law": "extensive", **_pairs_repr(lang, asserted=g1, denied=g0)}
            elif not op(*cx) <= cx:
                bad = {"law": "idempotent", **_pairs_repr(lang, asserted=g1, denied=g0)}
            else:
                for i in range(lang.n):
                    if not (cx <= op(g1 | 1 << i, g0) and cx <= op(g1, g0 | 1 << i)):
                        bad = {"law": "monotone", **_pairs_repr(lang, asserted=g1, denied=g0)}
                        break
            if bad:
                break
        if bad:
            break
    rep.add("1", bad is None, bad)

    bad = None
    for g1 in range(size):
        for g0 in range(size):
            acc = T
            for om in _partition_pairs(lang, g1, g0):
                acc = acc.meet(op(om, full & ~om))
            if acc != op(g1, g0):
                bad = _pairs_repr(lang, asserted=g1, denied=g0)
                break
        if bad:
            break
    rep.add("2", bad is None, bad)

    bad = None
    for om in range(size):
        r = op(om, full & ~om)
        if r not in (TheoryPair(om, full & ~om), T):
            bad = _pairs_repr(lang, omega=om)
            break
    rep.add("3", bad is None, bad)
    return rep


def check_c2_axioms(op, lang: Language | None = None) -> Report:
    """The four bilateral operator axioms, the (V)/(T) characterization, and their agreement."""
    if not isinstance(op, TabulatedOperator):
        op = TabulatedOperator.from_function(lang, op)
    lang = op.lang
    size, full = 1 << lang.n, lang.full
    T = top(lang)
    rep = Report("bilateral operator axioms")

    def first(pred):
        for g1 in range(size):
            for g0 in range(size):
                w = pred(g1, g0)
                if w is not None:
                    return w
        return None

    def co0(g1, g0):
        c = op(g1, g0)
        for i in range(lang.n):
            b = 1 << i
            for big in ((g1 | b, g0), (g1, g0 | b)):
                if not c <= op(*big):
                    return _pairs_repr(lang, asserted=g1, denied=g0, larger_asserted=big[0],
                                       larger_denied=big[1])
        return None

    def co1(g1, g0):
        return None if TheoryPair(g1, g0) <= op(g1, g0) else _pairs_repr(lang, asserted=g1, denied=g0)

    def co2(g1, g0):
        c = op(g1, g0)
        return None if op(*c) <= c else _pairs_repr(lang, asserted=g1, denied=g0)

    def omega_meet(g1, g0, only_consistent=False):
        acc = T
        for om in _partition_pairs(lang, g1, g0):
            r = op(om, full & ~om)
            if only_consistent:
                if r != T:
                    acc = acc.meet(TheoryPair(om, full & ~om))
            else:
                acc = acc.meet(r)
        return acc

    def co3(g1, g0):
        return None if omega_meet(g1, g0) <= op(g1, g0) else _pairs_repr(lang, asserted=g1, denied=g0)

    def v_prop(g1, g0):
        if g1 | g0 != full or g1 & g0:
            return None
        r = op(g1, g0)
        return None if r in (TheoryPair(g1, g0), T) else _pairs_repr(lang, omega=g1)

    def t_prop(g1, g0):
        return None if op(g1, g0) == omega_meet(g1, g0, True) else _pairs_repr(lang, asserted=g1, denied=g0)

    for name, pred in (("S-CO0", co0), ("S-CO1", co1), ("S-CO2", co2), ("S-CO3", co3),
                       ("V", v_prop), ("T", t_prop)):
        w = first(pred)
        rep.add(name, w is None, w)

    axioms = all(rep[k].ok for k in ("S-CO0", "S-CO1", "S-CO2", "S-CO3"))
    characterization = rep["V"].ok and rep["T"].ok
    rep.add("axioms<->V+T", axioms == characterization,
            {"axioms": axioms, "V+T": characterization})
    derived = not (rep["S-CO0"].ok and rep["S-CO1"].ok and rep["S-CO3"].ok) or rep["S-CO2"].ok
    rep.add("S-CO2 from S-CO0,S-CO1,S-CO3", derived, {"S-CO2": rep["S-CO2"].ok})
    return rep


def is_operator(report: Report) -> bool:
    return all(report[k].ok for k in ("S-CO0", "S-CO1", "S-CO2", "S-CO3"))


def s_conseq_from_operator(op: TabulatedOperator) -> ExtensionalConsequence:
    """Pi |- Sigma iff op(Pi, Sigma) = (L, L)."""
    rep = check_c2_axioms(op)
    if not is_operator(rep):
        bad = ", ".join(i.item for i in rep.failures())
        raise PreconditionError(f"not a bilateral consequence operator (fails {bad})")
    full = op.lang.full
    return ExtensionalConsequence(op.lang, (op.t1 == full) & (op.t0 == full))


# -- finitariness at desk scale ----------------------------------------------------


@dataclass
class FinitaryProbe:
    """One truncation of a parametric family, with the consecutions to inspect."""

    rel: SConsequence
    s_targets: list[tuple[int, int]] = field(default_factory=list)
    t_targets: list[tuple[int, int]] = field(default_factory=list)


def _union_decomposes(rel: SConsequence, pi: int, sigma: int) -> bool:
    """Both halves of the context-union identity for the contextual operators."""
    ua = ud = 0
    for s in submasks(sigma):
        ua |= c_assert_mod_denied(rel, s, pi)
    for p in submasks(pi):
        ud |= c_deny_mod_asserted(rel, p, sigma)
    return ua == c_assert_mod_denied(rel, sigma, pi) and ud == c_deny_mod_asserted(rel, pi, sigma)


def _trend(values: list[int]) -> str:
    if len(values) >= 2 and all(b > a for a, b in zip(values, values[1:])):
        return "growing"
    return "bounded"


def check_finitariness(family: Callable[[int], FinitaryProbe], sizes: Iterable[int]) -> dict:
    """Minimal witness sizes per truncation and the trend they show.

    Every finite-language relation is finitary, so the verdict is a trend:
    minimal witnesses that keep growing with the truncation size signal a
    non-finitary limit; bounded ones signal a finitary one.
    """
    rows = []
    s_series: list[int] = []
    t_series: list[int] = []
    for N in sizes:
        probe = family(N)
        lang = probe.rel.lang
        s_max = 0
        for pi, sigma in probe.s_targets:
            w = witness_sizes(probe.rel, pi, sigma)
            rows.append({
                "N": N, "kind": "S",
                "target": {"asserted": lang.names(pi), "denied": lang.names(sigma)},
                "holds": w is not None,
                "premise_witness": None if w is None else w[0],
                "denied_witness": None if w is None else w[1],
                "context_union": _union_decomposes(probe.rel, pi, sigma),
            })
            if w is not None:
                s_max = max(s_max, w[1])
        t_max = 0
        for gamma, a in probe.t_targets:
            w = witness_sizes(probe.rel, gamma, 1 << a)
            rows.append({
                "N": N, "kind": "T",
                "target": {"premises": lang.names(gamma), "conclusion": lang.names(1 << a)[0]},
                "holds": w is not None,
                "premise_witness": None if w is None else w[0],
                "denied_witness": None if w is None else w[1],
            })
            if w is not None:
                t_max = max(t_max, w[0])
        s_series.append(s_max)
        t_series.append(t_max)
    return {
        "rows": rows,
        "s_denied_witness_by_N": s_series,
        "t_premise_witness_by_N": t_series,
        "s_trend": "non-finitary trend" if _trend(s_series) == "growing" else "bounded",
        "t_trend": "non-finitary trend" if _trend(t_series) == "growing" else "bounded",
        "note": "finite truncations are always finitary; only the witness trend is evidence",
    }
