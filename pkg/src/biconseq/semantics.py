"""Bivaluations, semantics, respectful semantics and conjunctive closure.

A bivaluation is stored as the ``int`` mask of the sentences it asserts;
everything outside the mask is denied, so valuations are total and functional
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from biconseq.bits import submasks
from biconseq.config import require_within_cap
from biconseq.errors import ParseError, PreconditionError
from biconseq.sentences import Language


class Consecution(NamedTuple):
    """Assert everything in ``asserted``, deny everything in ``denied``."""

    asserted: int
    denied: int


@dataclass(frozen=True, eq=False)
class Semantics:
    lang: Language
    valuations: frozenset[int]

    def __init__(self, lang: Language, valuations: Iterable[int] = ()):
        vals = frozenset(int(v) for v in valuations)
        for v in vals:
            if v < 0 or v > lang.full:
                raise PreconditionError(f"valuation {v} is not over this language")
        object.__setattr__(self, "lang", lang)
        object.__setattr__(self, "valuations", vals)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.valuations))

    def __len__(self) -> int:
        return len(self.valuations)

    def __contains__(self, v: int) -> bool:
        return v in self.valuations

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Semantics)
            and self.lang == other.lang
            and self.valuations == other.valuations
        )

    def __hash__(self) -> int:
        return hash((self.lang, self.valuations))

    def __le__(self, other: Semantics) -> bool:
        return self.valuations <= other.valuations

    def __lt__(self, other: Semantics) -> bool:
        return self.valuations < other.valuations

    def __or__(self, other: Semantics) -> Semantics:
        return Semantics(self.lang, self.valuations | other.valuations)

    def __repr__(self) -> str:
        body = ", ".join(self.bitstring(v) for v in self)
        return f"Semantics([{body}])"

    def bitstring(self, v: int) -> str:
        return "".join("1" if v >> i & 1 else "0" for i in range(self.lang.n))

    def array(self) -> np.ndarray:
        return np.array(sorted(self.valuations), dtype=np.int64)

    # -- semantics file format ------------------------------------------

    def to_text(self, lang_ref: str) -> str:
        return f"@lang {lang_ref}\n" + "".join(self.bitstring(v) + "\n" for v in self)

    @staticmethod
    def header_ref(text: str) -> str:
        first = text.lstrip().splitlines()[0] if text.strip() else ""
        if not first.startswith("@lang "):
            raise ParseError("semantics file must start with '@lang <language-file>'")
        return first[len("@lang "):].strip()

    @classmethod
    def from_text(cls, text: str, lang: Language) -> Semantics:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        cls.header_ref(text)
        vals = []
        for lineno, ln in enumerate(lines[1:], start=2):
            if len(ln) != lang.n or set(ln) - {"0", "1"}:
                raise ParseError(
                    f"line {lineno}: expected a {lang.n}-character bitstring, got {ln!r}"
                )
            vals.append(sum(1 << i for i, ch in enumerate(ln) if ch == "1"))
        return cls(lang, vals)


def bitstring_to_valuation(bits: str) -> int:
    return sum(1 << i for i, ch in enumerate(bits) if ch == "1")


def all_valuations(lang: Language, cap: int | None = None) -> Semantics:
    require_within_cap(lang.n, cap)
    return Semantics(lang, range(1 << lang.n))


def determined_compat(v: int, c: tuple[int, int]) -> bool:
    pi, sigma = c
    return pi & ~v == 0 and sigma & v == 0


def semantics_compat(V: Semantics, c: tuple[int, int]) -> bool:
    pi, sigma = c
    return any(pi & ~v == 0 and sigma & v == 0 for v in V.valuations)


def conj_combination(family: Iterable[int], lang: Language) -> int:
    """Valuation asserting exactly what every member asserts (empty family: all of L)."""
    return reduce(lambda a, b: a & b, family, lang.full)


def conj_closure(V: Semantics) -> Semantics:
    """Least superset closed under conjunctive combination of any subfamily."""
    closed = set(V.valuations)
    closed.add(V.lang.full)
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                c = a & b
                if c not in closed:
                    closed.add(c)
                    new.append(c)
        frontier = new
    return Semantics(V.lang, closed)


def compat_table(V: Semantics) -> np.ndarray:
    """Boolean table ``t[pi, sigma]`` of the compatibility relation determined by V."""
    require_within_cap(V.lang.n, 12, "tabulated language")
    size = 1 << V.lang.n
    table = np.zeros((size, size), dtype=bool)
    idx = np.arange(size, dtype=np.int64)
    for v in V.valuations:
        pis = idx[(idx & ~v) == 0]
        sigmas = idx[(idx & v) == 0]
        table[np.ix_(pis, sigmas)] = True
    return table


def _sub_pairs(v: int, full: int) -> Iterator[tuple[int, int]]:
    for pi in submasks(v):
        for sigma in submasks(full & ~v):
            yield pi, sigma


def respects(v: int, rel, exhaustive: bool = False) -> bool:
    """Does valuation ``v`` respect ``rel`` (a compatibility, S- or T-relation)?

    With ``exhaustive`` the definition is checked on every consecution the
    valuation makes compatible; otherwise only on the maximal one
    ``(1_v, 0_v)``, which is equivalent for relations obeying weakening.
    """
    full = rel.lang.full
    kind = rel.kind
    if kind == "compat":
        if exhaustive:
            return all(rel.holds(p, s) for p, s in _sub_pairs(v, full))
        return rel.holds(v, full & ~v)
    if kind == "S":
        if exhaustive:
            return not any(rel.holds(p, s) for p, s in _sub_pairs(v, full))
        return not rel.holds(v, full & ~v)
    if kind == "T":
        denied = [i for i in range(rel.lang.n) if not v >> i & 1]
        if exhaustive:
            return not any(rel.holds(p, a) for p in submasks(v) for a in denied)
        return not any(rel.holds(v, a) for a in denied)
    raise PreconditionError(f"unknown relation kind {kind!r}")


def val_of(rel, lang: Language | None = None, cap: int | None = None,
           exhaustive: bool = False) -> Semantics:
    """All canonical valuations respecting ``rel`` (brute force over 2^|L|)."""
    lang = lang if lang is not None else rel.lang
    require_within_cap(lang.n, cap)
    return Semantics(lang, (v for v in range(1 << lang.n) if respects(v, rel, exhaustive)))
