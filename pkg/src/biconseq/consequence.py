"""Compatibility, S- and T-consequence relations as queryable objects.

Every relation exposes ``kind`` ("compat", "S" or "T"), ``lang`` and
``holds``. S-relations and compatibility relations answer
``holds(pi, sigma)`` on sentence masks; T-relations answer
``holds(gamma, a)`` with ``a`` a sentence position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from biconseq.bits import bits_of, popcount, submasks
from biconseq.config import require_within_cap
from biconseq.errors import ParseError, PreconditionError
from biconseq.report import Report
from biconseq.semantics import (
    Consecution,
    Semantics,
    compat_table,
    conj_closure,
    val_of,
)
from biconseq.sentences import IDENT, Language, LanguageSpec, Sentence, parse_sentence

AXIOM_CHECK_LIMIT = 4
TABLE_LIMIT = 12

__all__ = [
    "Compatibility",
    "Consecution",
    "ConsecutionSchema",
    "ExtensionalConsequence",
    "ExtensionalT",
    "SemanticConsequence",
    "assertion_T",
    "check_S_axioms",
    "check_T_axioms",
    "check_compat_axioms",
    "denial_T",
    "holds",
    "is_T_consistent",
    "max_counterpart",
    "min_counterpart",
    "min_counterpart_holds",
    "models_of_instances",
    "relatively_maximal_theories",
    "s_conseq_least",
    "t_closure",
    "t_theories",
]


# -- S-consequence ----------------------------------------------------------


class SConsequence:
    kind = "S"
    lang: Language

    def holds(self, pi: int, sigma: int) -> bool:
        raise NotImplementedError

    def __contains__(self, c) -> bool:
        return self.holds(*c)

    def table(self) -> np.ndarray:
        require_within_cap(self.lang.n, TABLE_LIMIT, "tabulated language")
        size = 1 << self.lang.n
        t = np.zeros((size, size), dtype=bool)
        for pi in range(size):
            for sigma in range(size):
                t[pi, sigma] = self.holds(pi, sigma)
        return t

    def complement(self) -> Compatibility:
        return Compatibility(self.lang, ~self.table())

    def same_as(self, other: SConsequence) -> bool:
        return self.lang == other.lang and np.array_equal(self.table(), other.table())


class SemanticConsequence(SConsequence):
    """Pi |- Sigma iff no valuation asserts all of Pi while denying all of Sigma."""

    def __init__(self, semantics: Semantics):
        self.semantics = semantics
        self.lang = semantics.lang
        self._vals = tuple(sorted(semantics.valuations))

    def holds(self, pi: int, sigma: int) -> bool:
        for v in self._vals:
            if pi & ~v == 0 and sigma & v == 0:
                return False
        return True

    def countermodel(self, pi: int, sigma: int) -> int | None:
        for v in self._vals:
            if pi & ~v == 0 and sigma & v == 0:
                return v
        return None

    def table(self) -> np.ndarray:
        return ~compat_table(self.semantics)

    def same_as(self, other: SConsequence) -> bool:
        if isinstance(other, SemanticConsequence):
            return self.semantics == other.semantics
        return super().same_as(other)

    def __repr__(self) -> str:
        return f"SemanticConsequence({len(self.semantics)} valuations over |L|={self.lang.n})"


class ExtensionalConsequence(SConsequence):
    """An S-relation given as an explicit table; only trusted after check_S_axioms."""

    def __init__(self, lang: Language, table: np.ndarray):
        size = 1 << lang.n
        table = np.asarray(table, dtype=bool)
        if table.shape != (size, size):
            raise PreconditionError(f"table must have shape {(size, size)}")
        self.lang = lang
        self._table = table

    @classmethod
    def from_consecutions(cls, lang: Language, consecutions: Iterable[tuple[int, int]]):
        require_within_cap(lang.n, TABLE_LIMIT, "tabulated language")
        size = 1 << lang.n
        t = np.zeros((size, size), dtype=bool)
        for pi, sigma in consecutions:
            t[pi, sigma] = True
        return cls(lang, t)

    def holds(self, pi: int, sigma: int) -> bool:
        return bool(self._table[pi, sigma])

    def table(self) -> np.ndarray:
        return self._table.copy()

    def to_semantics(self) -> SemanticConsequence:
        """Semantic representative (exact whenever the S-axioms hold)."""
        return SemanticConsequence(val_of(self))

    def __repr__(self) -> str:
        return f"ExtensionalConsequence({int(self._table.sum())} consecutions over |L|={self.lang.n})"


class Compatibility:
    kind = "compat"

    def __init__(self, lang: Language, table: np.ndarray):
        size = 1 << lang.n
        table = np.asarray(table, dtype=bool)
        if table.shape != (size, size):
            raise PreconditionError(f"table must have shape {(size, size)}")
        self.lang = lang
        self._table = table

    @classmethod
    def from_semantics(cls, V: Semantics) -> Compatibility:
        return cls(V.lang, compat_table(V))

    @classmethod
    def from_consecutions(cls, lang: Language, consecutions: Iterable[tuple[int, int]]):
        return cls(lang, ExtensionalConsequence.from_consecutions(lang, consecutions).table())

    def holds(self, pi: int, sigma: int) -> bool:
        return bool(self._table[pi, sigma])

    def __contains__(self, c) -> bool:
        return self.holds(*c)

    def table(self) -> np.ndarray:
        return self._table.copy()

    def complement(self) -> ExtensionalConsequence:
        return ExtensionalConsequence(self.lang, ~self._table)


def holds(rel, c: tuple[int, int]) -> bool:
    return rel.holds(*c)


# -- T-consequence ----------------------------------------------------------


class TConsequence:
    kind = "T"
    lang: Language

    def holds(self, gamma: int, a: int) -> bool:
        raise NotImplementedError

    def closure(self, gamma: int) -> int:
        out = 0
        for a in range(self.lang.n):
            if self.holds(gamma, a):
                out |= 1 << a
        return out

    def table(self) -> np.ndarray:
        require_within_cap(self.lang.n, TABLE_LIMIT, "tabulated language")
        size = 1 << self.lang.n
        t = np.zeros((size, self.lang.n), dtype=bool)
        for g in range(size):
            for a in range(self.lang.n):
                t[g, a] = self.holds(g, a)
        return t


class AssertionT(TConsequence):
    """Gamma |-T A iff Gamma |- {A}."""

    def __init__(self, srel: SConsequence):
        self.srel = srel
        self.lang = srel.lang

    def holds(self, gamma: int, a: int) -> bool:
        return self.srel.holds(gamma, 1 << a)

    def closure(self, gamma: int) -> int:
        if isinstance(self.srel, SemanticConsequence):
            return closure_by_models(self.srel.semantics, gamma)
        return super().closure(gamma)


class DenialT(TConsequence):
    """Sigma |-T A (denial-based) iff {A} |- Sigma."""

    def __init__(self, srel: SConsequence):
        self.srel = srel
        self.lang = srel.lang

    def holds(self, sigma: int, a: int) -> bool:
        return self.srel.holds(1 << a, sigma)


class ExtensionalT(TConsequence):
    def __init__(self, lang: Language, table: np.ndarray):
        table = np.asarray(table, dtype=bool)
        if table.shape != (1 << lang.n, lang.n):
            raise PreconditionError(f"table must have shape {(1 << lang.n, lang.n)}")
        self.lang = lang
        self._table = table

    @classmethod
    def from_pairs(cls, lang: Language, pairs: Iterable[tuple[int, int]]) -> ExtensionalT:
        require_within_cap(lang.n, TABLE_LIMIT, "tabulated language")
        t = np.zeros((1 << lang.n, lang.n), dtype=bool)
        for gamma, a in pairs:
            t[gamma, a] = True
        return cls(lang, t)

    def holds(self, gamma: int, a: int) -> bool:
        return bool(self._table[gamma, a])

    def table(self) -> np.ndarray:
        return self._table.copy()


class SemanticT(TConsequence):
    """T-relation determined directly by a semantics (truth preservation)."""

    def __init__(self, semantics: Semantics):
        self.semantics = semantics
        self.lang = semantics.lang

    def holds(self, gamma: int, a: int) -> bool:
        return all(v >> a & 1 for v in self.semantics.valuations if gamma & ~v == 0)

    def closure(self, gamma: int) -> int:
        return closure_by_models(self.semantics, gamma)


def assertion_T(rel: SConsequence) -> AssertionT:
    return AssertionT(rel)


def denial_T(rel: SConsequence) -> DenialT:
    return DenialT(rel)


def t_closure(rel: TConsequence, gamma: int) -> int:
    return rel.closure(gamma)


def closure_by_models(V: Semantics, gamma: int) -> int:
    """Intersection of the asserted sets of all models of gamma (L if none)."""
    out = V.lang.full
    for v in V.valuations:
        if gamma & ~v == 0:
            out &= v
    return out


def is_T_consistent(rel: TConsequence, gamma: int) -> bool:
    return t_closure(rel, gamma) != rel.lang.full


def t_theories(rel: TConsequence, cap: int | None = None) -> list[int]:
    """Th(rel): every closed set, sorted."""
    require_within_cap(rel.lang.n, cap)
    return sorted({rel.closure(g) for g in range(1 << rel.lang.n)})


# -- axiom checkers -----------------------------------------------------------


def _pair(lang: Language, pi: int, sigma: int) -> dict:
    return {"asserted": lang.names(int(pi)), "denied": lang.names(int(sigma))}


def _first(mask: np.ndarray):
    hits = np.argwhere(mask)
    return tuple(int(x) for x in hits[0]) if len(hits) else None


def _check_size(lang: Language) -> None:
    if lang.n > AXIOM_CHECK_LIMIT:
        raise PreconditionError(
            f"exhaustive axiom sweep needs |L| <= {AXIOM_CHECK_LIMIT}, got {lang.n}"
        )


def _table_of(rel, lang: Language) -> np.ndarray:
    return rel.table() if hasattr(rel, "table") else ExtensionalConsequence.from_consecutions(lang, rel).table()


def check_S_axioms(rel, lang: Language | None = None) -> Report:
    """(S0) weakening, (S1) overlap, (S2) cut over every Delta subset of L."""
    lang = lang if lang is not None else rel.lang
    _check_size(lang)
    t = _table_of(rel, lang)
    size = 1 << lang.n
    idx = np.arange(size)
    rep = Report("S-consequence axioms")

    witness = None
    for i in range(lang.n):
        x = 1 << i
        bad = _first(t & ~t[idx | x, :])
        if bad is None:
            bad = _first(t & ~t[:, idx | x])
            grow = (0, x)
        else:
            grow = (x, 0)
        if bad is not None:
            pi, sigma = bad
            witness = {
                "holds": _pair(lang, pi, sigma),
                "missing": _pair(lang, pi | grow[0], sigma | grow[1]),
            }
            break
    rep.add("S0", witness is None, witness)

    overlap = (idx[:, None] & idx[None, :]) != 0
    bad = _first(overlap & ~t)
    rep.add("S1", bad is None, bad and _pair(lang, *bad))

    witness = None
    for delta in range(size):
        acc = np.ones_like(t)
        for d1 in submasks(delta):
            acc &= t[np.ix_(idx | d1, idx | (delta & ~d1))]
        bad = _first(acc & ~t)
        if bad is not None:
            witness = {**_pair(lang, *bad), "delta": lang.names(delta)}
            break
    rep.add("S2", witness is None, witness)
    return rep


def check_compat_axioms(rel, lang: Language | None = None) -> Report:
    """(C0) restriction, (C1) no gluts, (C2) no gaps over every Delta subset of L."""
    lang = lang if lang is not None else rel.lang
    _check_size(lang)
    t = _table_of(rel, lang)
    size = 1 << lang.n
    idx = np.arange(size)
    rep = Report("compatibility axioms")

    witness = None
    for i in range(lang.n):
        x = 1 << i
        for bigger, grow in ((t[idx | x, :], (x, 0)), (t[:, idx | x], (0, x))):
            bad = _first(bigger & ~t)
            if bad is not None:
                pi, sigma = bad
                witness = {
                    "compatible": _pair(lang, pi | grow[0], sigma | grow[1]),
                    "incompatible_part": _pair(lang, pi, sigma),
                }
                break
        if witness:
            break
    rep.add("C0", witness is None, witness)

    overlap = (idx[:, None] & idx[None, :]) != 0
    bad = _first(overlap & t)
    rep.add("C1", bad is None, bad and _pair(lang, *bad))

    witness = None
    for delta in range(size):
        some = np.zeros_like(t)
        for d1 in submasks(delta):
            some |= t[np.ix_(idx | d1, idx | (delta & ~d1))]
        bad = _first(t & ~some)
        if bad is not None:
            witness = {**_pair(lang, *bad), "delta": lang.names(delta)}
            break
    rep.add("C2", witness is None, witness)
    return rep


def check_T_axioms(rel, lang: Language | None = None) -> Report:
    """(T0) monotonicity, (T1) reflexivity, (T2) cut over every Delta subset of L."""
    lang = lang if lang is not None else rel.lang
    _check_size(lang)
    t = rel.table()
    n, size = lang.n, 1 << lang.n
    idx = np.arange(size)
    rep = Report("T-consequence axioms")

    def fmt(g, a):
        return {"premises": lang.names(int(g)), "conclusion": lang.names(1 << int(a))[0]}

    witness = None
    for i in range(n):
        bad = _first(t & ~t[idx | (1 << i), :])
        if bad is not None:
            witness = {"holds": fmt(*bad), "added": lang.names(1 << i)}
            break
    rep.add("T0", witness is None, witness)

    member = ((idx[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)
    bad = _first(member & ~t)
    rep.add("T1", bad is None, bad and fmt(*bad))

    witness = None
    for delta in range(size):
        prem = t[idx | delta, :].copy()
        for d in bits_of(delta):
            prem &= t[:, d][:, None]
        bad = _first(prem & ~t)
        if bad is not None:
            witness = {**fmt(*bad), "delta": lang.names(delta)}
            break
    rep.add("T2", witness is None, witness)
    return rep


# -- consecutions and schemas ----------------------------------------------


def parse_consecution(text: str, lang: Language) -> Consecution:
    """``p, p->q |- q``; either side may be empty."""
    left, sep, right = text.partition("|-")
    if not sep:
        raise ParseError(f"consecution needs '|-': {text!r}")
    if "|-" in right:
        raise ParseError(f"more than one '|-' in {text!r}")
    return Consecution(lang.parse_set(left), lang.parse_set(right))


def format_consecution(c: tuple[int, int], lang: Language) -> str:
    pi, sigma = c
    left = ", ".join(lang.names(pi))
    right = ", ".join(lang.names(sigma))
    return f"{left} |- {right}".strip()


def parse_consecutions(text: str, lang: Language) -> list[Consecution]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_consecution(line, lang))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return out


_METAVAR = re.compile(r"[A-Z]")


def _substitute(pattern: Sentence, assignment: dict[str, Sentence]) -> Sentence:
    if pattern.is_atom:
        return assignment.get(pattern.name, pattern)
    return Sentence(connective=pattern.connective,
                    args=tuple(_substitute(a, assignment) for a in pattern.args))


@dataclass(frozen=True)
class ConsecutionSchema:
    """A consecution over metavariables (single uppercase letters not naming sentences)."""

    asserted: tuple[Sentence, ...]
    denied: tuple[Sentence, ...]
    metavariables: tuple[str, ...]

    @classmethod
    def parse(cls, text: str, lang: Language) -> ConsecutionSchema:
        left, sep, right = text.partition("|-")
        if not sep:
            raise ParseError(f"schema needs '|-': {text!r}")
        spec = lang.spec
        metas: list[str] = []
        if spec.mode == "explicit":
            def parse_one(tok: str) -> Sentence:
                if tok in spec.names:
                    return Sentence.atom(tok)
                if _METAVAR.fullmatch(tok):
                    if tok not in metas:
                        metas.append(tok)
                    return Sentence.atom(tok)
                raise ParseError(f"unknown sentence {tok!r}")
        else:
            for ident in IDENT.findall(text):
                if _METAVAR.fullmatch(ident) and ident not in spec.atoms and ident not in metas:
                    metas.append(ident)
            pattern_spec = LanguageSpec.generated(spec.atoms + tuple(metas), spec.connectives, 0)

            def parse_one(tok: str) -> Sentence:
                return parse_sentence(tok, pattern_spec)

        sides = []
        for part in (left, right):
            sides.append(tuple(parse_one(t.strip()) for t in part.split(",") if t.strip()))
        return cls(sides[0], sides[1], tuple(sorted(metas)))

    def instances(self, lang: Language) -> Iterator[Consecution]:
        """Every ground instance landing inside the language; others are skipped."""
        import itertools

        for combo in itertools.product(lang.sentences, repeat=len(self.metavariables)):
            assignment = dict(zip(self.metavariables, combo))
            try:
                pi = lang.mask(_substitute(s, assignment) for s in self.asserted)
                sigma = lang.mask(_substitute(s, assignment) for s in self.denied)
            except ParseError:
                continue
            yield Consecution(pi, sigma)


def parse_schemas(text: str, lang: Language) -> list[ConsecutionSchema]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(ConsecutionSchema.parse(line, lang))
    return out


def models_of_instances(instances: Iterable[tuple[int, int]], lang: Language) -> Semantics:
    """Valuations violating none of the instances, by ordered backtracking.

    Each instance (Pi, Sigma) rules out the valuations asserting Pi and
    denying Sigma; it is tested as soon as its highest sentence is assigned.
    """
    n = lang.n
    by_last: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for pi, sigma in set(instances):
        if pi & sigma:
            continue
        span = pi | sigma
        if span == 0:
            return Semantics(lang, ())
        by_last[span.bit_length() - 1].append((pi, sigma))

    models = []
    stack = [(0, 0)]
    while stack:
        i, v = stack.pop()
        if i == n:
            models.append(v)
            continue
        for bit in (1 << i, 0):
            w = v | bit
            if all(not (pi & ~w == 0 and sigma & w == 0) for pi, sigma in by_last[i]):
                stack.append((i + 1, w))
    return Semantics(lang, models)


def s_conseq_least(schemas: Iterable[ConsecutionSchema | tuple[int, int]],
                   lang: Language) -> SemanticConsequence:
    """Least S-relation containing every instance: the one determined by its respecting valuations."""
    instances: list[tuple[int, int]] = []
    for sch in schemas:
        if isinstance(sch, ConsecutionSchema):
            instances.extend(sch.instances(lang))
        else:
            instances.append(tuple(sch))
    return SemanticConsequence(models_of_instances(instances, lang))


# -- counterparts -------------------------------------------------------------


def min_counterpart_holds(trel: TConsequence, c: tuple[int, int]) -> bool:
    """(Pi, Sigma) is in the minimum counterpart iff Pi |-T A for some A in Sigma."""
    pi, sigma = c
    return any(trel.holds(pi, a) for a in bits_of(sigma))


def min_counterpart(trel: TConsequence, lang: Language | None = None,
                    cap: int | None = None) -> SemanticConsequence:
    lang = lang if lang is not None else trel.lang
    return SemanticConsequence(val_of(trel, lang, cap))


def relatively_maximal_theories(trel: TConsequence, lang: Language | None = None,
                                cap: int | None = None) -> list[int]:
    """Closed T with some A outside T that every proper extension of T entails."""
    lang = lang if lang is not None else trel.lang
    out = []
    for T in t_theories(trel, cap):
        if T == lang.full:
            continue
        common = lang.full
        for b in bits_of(lang.full & ~T):
            common &= trel.closure(T | (1 << b))
        if common & ~T:
            out.append(T)
    return out


def max_counterpart(trel: TConsequence, lang: Language | None = None,
                    cap: int | None = None) -> SemanticConsequence | None:
    """Relation of the relatively maximal valuations, if they regenerate Val(trel)."""
    lang = lang if lang is not None else trel.lang
    candidate = Semantics(lang, relatively_maximal_theories(trel, lang, cap))
    if conj_closure(candidate) == val_of(trel, lang, cap):
        return SemanticConsequence(candidate)
    return None


def _min_sub(mask: int, ok) -> int | None:
    for k in range(popcount(mask) + 1):
        for sub in submasks(mask):
            if popcount(sub) == k and ok(sub):
                return k
    return None


def witness_sizes(rel: SConsequence, pi: int, sigma: int) -> tuple[int, int] | None:
    """Smallest premise side and smallest denied side still yielding the consecution.

    Each side is shrunk with the other held at full size, which weakening
    makes the most permissive choice. ``None`` when ``pi |- sigma`` fails.
    """
    if not rel.holds(pi, sigma):
        return None
    return (
        _min_sub(pi, lambda p: rel.holds(p, sigma)),
        _min_sub(sigma, lambda s: rel.holds(pi, s)),
    )
