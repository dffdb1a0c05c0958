"""Theory-pair spaces, the consistency lemma, ultrafilters and ultraproducts.

Index sets are finite, so every ultrafilter here is principal. The machinery
is still written against the general definitions (membership tests on
subsets, majority-vote ultraproducts) so that the finite case is an instance
rather than a shortcut.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from biconseq.bits import submasks
from biconseq.consequence import ExtensionalConsequence, SConsequence, SemanticConsequence
from biconseq.errors import InvariantError, PreconditionError
from biconseq.operators import SWEEP_LIMIT, TheoryPair, c2, top
from biconseq.report import Report
from biconseq.sentences import Language

THEORY_CAP = 20


def _semantic(rel: SConsequence) -> SemanticConsequence:
    if isinstance(rel, SemanticConsequence):
        return rel
    if isinstance(rel, ExtensionalConsequence):
        return rel.to_semantics()
    raise PreconditionError("theory-pair enumeration needs a semantic or tabulated relation")


# -- the space ---------------------------------------------------------------------


@dataclass(frozen=True)
class TheorySpace:
    rel: SConsequence
    pairs: frozenset

    @property
    def lang(self) -> Language:
        return self.rel.lang

    def __iter__(self):
        return iter(sorted(self.pairs, key=lambda x: (bin(x.theorems).count("1") + bin(x.antitheorems).count("1"), x)))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, x) -> bool:
        return TheoryPair(*x) in self.pairs

    def to_list(self) -> list[dict]:
        maxi = maximal_pairs(self)
        return [dict(x.to_dict(self.lang), maximal=x in maxi) for x in self]


def enumerate_theory_pairs(rel: SConsequence, lang: Language | None = None,
                           cap: int = THEORY_CAP) -> TheorySpace:
    """Every intersection of model pairs, with (L, L) for the empty family."""
    srel = _semantic(rel)
    lang = lang if lang is not None else srel.lang
    V = srel.semantics
    if len(V) > cap:
        raise PreconditionError(f"semantics has {len(V)} valuations, theory enumeration cap is {cap}")
    full = lang.full
    models = {TheoryPair(v, full & ~v) for v in V}
    closed = set(models) | {top(lang)}
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                m = a.meet(b)
                if m not in closed:
                    closed.add(m)
                    new.append(m)
        frontier = new
    return TheorySpace(rel, frozenset(closed))


def c2_image(rel: SConsequence, lang: Language | None = None) -> frozenset:
    """Brute force: close every (Gamma1, Gamma0)."""
    lang = lang if lang is not None else rel.lang
    if lang.n > SWEEP_LIMIT:
        raise PreconditionError(f"brute-force closure image needs |L| <= {SWEEP_LIMIT}")
    size = 1 << lang.n
    return frozenset(c2(rel, g1, g0) for g1 in range(size) for g0 in range(size))


def meet(a: TheoryPair, b: TheoryPair) -> TheoryPair:
    return TheoryPair(*a).meet(TheoryPair(*b))


def join(a: TheoryPair, b: TheoryPair, rel: SConsequence) -> TheoryPair:
    u = TheoryPair(*a).union(TheoryPair(*b))
    return c2(rel, u.theorems, u.antitheorems)


def maximal_pairs(space: TheorySpace) -> frozenset:
    """Consistent pairs whose only proper extension in the space is (L, L)."""
    T = top(space.lang)
    cands = [x for x in space.pairs if x != T]
    return frozenset(
        x for x in cands if not any(y != x and x <= y for y in cands)
    )


def check_lattice(space: TheorySpace) -> Report:
    rep = Report("theory-pair lattice")
    members = sorted(space.pairs)
    bad_meet = bad_join = None
    for a, b in itertools.combinations_with_replacement(members, 2):
        if bad_meet is None and meet(a, b) not in space:
            bad_meet = {"a": a.to_dict(space.lang), "b": b.to_dict(space.lang)}
        if bad_join is None and join(a, b, space.rel) not in space:
            bad_join = {"a": a.to_dict(space.lang), "b": b.to_dict(space.lang)}
    rep.add("meet closed", bad_meet is None, bad_meet)
    rep.add("join closed", bad_join is None, bad_join)
    rep.add("top present", top(space.lang) in space, None)
    return rep


def assertion_projection(space: TheorySpace) -> frozenset:
    return frozenset(x.theorems for x in space.pairs)


# -- consistency -------------------------------------------------------------------


class Consistency(NamedTuple):
    consistent: bool
    witness: int | None


LEMMA_STATS = {"queries": 0, "disagreements": 0}


def reset_lemma_stats() -> None:
    LEMMA_STATS.update(queries=0, disagreements=0)


def is_consistent_pair(rel: SConsequence, gamma1: int, gamma0: int) -> Consistency:
    """Decide consistency three ways and insist they agree.

    [a] the closure is not (L, L); [b] the closed components are disjoint;
    [c] gamma1 does not entail gamma0.
    """
    t1, t0 = c2(rel, gamma1, gamma0)
    full = rel.lang.full
    a = not (t1 == full and t0 == full)
    b = t1 & t0 == 0
    c = not rel.holds(gamma1, gamma0)
    LEMMA_STATS["queries"] += 1
    if not a == b == c:
        LEMMA_STATS["disagreements"] += 1
        raise InvariantError(f"consistency characterizations disagree: [a]={a} [b]={b} [c]={c}")
    witness = None
    if a and isinstance(rel, SemanticConsequence):
        witness = rel.countermodel(gamma1, gamma0)
    return Consistency(a, witness)


def is_closed_set_pair(rel: SConsequence, t1: int, t0: int) -> bool:
    for i in range(rel.lang.n):
        a = 1 << i
        if rel.holds(t1, t0 | a) != bool(t1 & a):
            return False
        if rel.holds(t1 | a, t0) != bool(t0 & a):
            return False
    return True


# -- ultrafilters ------------------------------------------------------------------


@dataclass(frozen=True)
class Ultrafilter:
    """The principal ultrafilter on a finite index set."""

    index_set: tuple
    generator: Hashable

    def __post_init__(self):
        if self.generator not in self.index_set:
            raise PreconditionError(f"generator {self.generator!r} is not in the index set")

    def __contains__(self, X) -> bool:
        return self.generator in set(X)

    def members(self) -> list[frozenset]:
        rest = [i for i in self.index_set if i != self.generator]
        return [
            frozenset((self.generator, *combo))
            for k in range(len(rest) + 1)
            for combo in itertools.combinations(rest, k)
        ]


def ultrafilter_principal(I: Iterable, i) -> Ultrafilter:
    return Ultrafilter(tuple(I), i)


def _powerset(I: Sequence) -> list[frozenset]:
    return [frozenset(c) for k in range(len(I) + 1) for c in itertools.combinations(I, k)]


def is_ultrafilter(I: Iterable, family: Iterable[Iterable]) -> bool:
    """The four defining conditions, checked literally."""
    I = tuple(I)
    whole = frozenset(I)
    U = {frozenset(X) for X in family}
    if any(not X <= whole for X in U):
        return False
    if frozenset() in U:
        return False
    subsets = _powerset(I)
    for X in U:
        if any(X <= Y and Y not in U for Y in subsets):
            return False
    for X, Y in itertools.product(U, repeat=2):
        if X & Y not in U:
            return False
    return all(X in U or whole - X in U for X in subsets)


def all_ultrafilters(I: Iterable) -> list[frozenset]:
    """Brute force over every family of subsets; only for tiny index sets."""
    I = tuple(I)
    if len(I) > 3:
        raise PreconditionError("brute-force ultrafilter search needs |I| <= 3")
    subsets = _powerset(I)
    found = []
    for k in range(len(subsets) + 1):
        for fam in itertools.combinations(subsets, k):
            if is_ultrafilter(I, fam):
                found.append(frozenset(fam))
    return found


def has_fip(W: Iterable[Iterable], I: Iterable) -> tuple[bool, list[frozenset] | None]:
    """Finite intersection property, with an offending subfamily when it fails."""
    acc = frozenset(I)
    W = [frozenset(X) for X in W]
    used = []
    for X in W:
        acc &= X
        used.append(X)
        if not acc:
            break
    if acc:
        return True, None
    # shrink to a minimal offending subfamily
    core = list(used)
    for X in list(core):
        trial = [Y for Y in core if Y is not X]
        inter = frozenset(I)
        for Y in trial:
            inter &= Y
        if trial and not inter:
            core = trial
    return False, core


def extend_fip_to_ultrafilter(W: Iterable[Iterable], I: Iterable) -> Ultrafilter:
    """Principal ultrafilter at the least index of the intersection of W."""
    I = tuple(I)
    if not I:
        raise PreconditionError("index set must be non-empty")
    W = [frozenset(X) for X in W]
    ok, bad = has_fip(W, I)
    if not ok:
        raise PreconditionError(
            "family lacks the finite intersection property; offending subfamily: "
            + str([sorted(X, key=I.index) for X in bad])
        )
    inter = frozenset(I)
    for X in W:
        inter &= X
    gen = next(i for i in I if i in inter)
    return Ultrafilter(I, gen)


def ultraproduct(family: Sequence | Mapping, U: Ultrafilter, lang: Language) -> TheoryPair:
    """Keep a sentence on a side when the indices that have it there form a member of U."""
    if isinstance(family, Mapping):
        if set(family) != set(U.index_set):
            raise PreconditionError("family is not indexed by the ultrafilter's index set")
        items = [(i, TheoryPair(*family[i])) for i in U.index_set]
    else:
        if len(family) != len(U.index_set):
            raise PreconditionError(
                f"family has {len(family)} members but the index set has {len(U.index_set)}"
            )
        items = [(i, TheoryPair(*x)) for i, x in zip(U.index_set, family)]
    t1 = t0 = 0
    for a in range(lang.n):
        bit = 1 << a
        if [i for i, x in items if x.theorems & bit] in U:
            t1 |= bit
        if [i for i, x in items if x.antitheorems & bit] in U:
            t0 |= bit
    return TheoryPair(t1, t0)


# -- closure under ultraproducts ----------------------------------------------------


def _shrink(rel: SConsequence, pi: int, sigma: int) -> tuple[int, int]:
    """A minimal sub-consecution that still holds (drop elements one at a time)."""
    for i in range(rel.lang.n):
        b = 1 << i
        if pi & b and rel.holds(pi & ~b, sigma):
            pi &= ~b
    for i in range(rel.lang.n):
        b = 1 << i
        if sigma & b and rel.holds(pi, sigma & ~b):
            sigma &= ~b
    return pi, sigma


def _replay_witness_sets(rel, family, U, result) -> bool:
    """Forward direction: every A entailed by the ultraproduct lands in it via I_D."""
    lang = rel.lang
    P, S = result
    index = U.index_set
    for a in range(lang.n):
        bit = 1 << a
        for side in ("assert", "deny"):
            holds = rel.holds(P, S | bit) if side == "assert" else rel.holds(P | bit, S)
            if not holds:
                continue
            ps, ss = _shrink(rel, P, S | bit) if side == "assert" else _shrink(rel, P | bit, S)
            ps = ps & ~bit if side == "deny" else ps
            ss = ss & ~bit if side == "assert" else ss
            I_D = set(index)
            for b in range(lang.n):
                if ps >> b & 1:
                    I_D &= {i for i, x in zip(index, family) if x.theorems >> b & 1}
                if ss >> b & 1:
                    I_D &= {i for i, x in zip(index, family) if x.antitheorems >> b & 1}
            if I_D not in U:
                return False
            comp = "theorems" if side == "assert" else "antitheorems"
            if not all(getattr(x, comp) & bit for i, x in zip(index, family) if i in I_D):
                return False
            if not getattr(result, comp) & bit:
                return False
    return True


def _replay_bullet_sets(rel: SConsequence, pi: int, sigma: int) -> bool:
    """Converse direction on a finite pair: cones over sub-pairs, then the ultraproduct."""
    lang = rel.lang
    index = tuple((p, s) for p in submasks(pi) for s in submasks(sigma))
    # bullet of i: the indices lying above i componentwise
    W = [
        frozenset(j for j in index if i[0] & ~j[0] == 0 and i[1] & ~j[1] == 0)
        for i in index
    ]
    U = extend_fip_to_ultrafilter(W, index)
    if not all(X in U for X in W):
        return False
    fam = [c2(rel, p, s) for p, s in index]
    res = ultraproduct(fam, U, lang)
    if not is_consistent_pair(rel, *res).consistent:
        return False
    return pi & ~res.theorems == 0 and sigma & ~res.antitheorems == 0


def check_ultraproduct_closure(rel: SConsequence, lang: Language | None = None,
                               max_index: int = 4, max_families: int = 20000,
                               replay_samples: int = 200, seed: int = 0) -> Report:
    lang = lang if lang is not None else rel.lang
    space = enumerate_theory_pairs(rel, lang)
    members = sorted(space.pairs)
    rng = random.Random(seed)
    rep = Report("closure under ultraproducts")
    closed = consistent = principal = replay = True
    bad_closed = bad_cons = bad_principal = bad_replay = None
    count = 0
    for k in range(1, max_index + 1):
        families = list(itertools.combinations_with_replacement(members, k))
        if len(families) > max_families:
            families = rng.sample(families, max_families)
        index = tuple(range(k))
        replay_pick = set(rng.sample(range(len(families)), min(replay_samples, len(families))))
        for n, fam in enumerate(families):
            all_consistent = all(x != top(lang) for x in fam)
            for gen in index:
                U = Ultrafilter(index, gen)
                res = ultraproduct(fam, U, lang)
                count += 1
                if res not in space and closed:
                    closed = False
                    bad_closed = {"family": [x.to_dict(lang) for x in fam], "generator": gen}
                if all_consistent and res == top(lang) and consistent:
                    consistent = False
                    bad_cons = {"family": [x.to_dict(lang) for x in fam], "generator": gen}
                if res != fam[gen] and principal:
                    principal = False
                    bad_principal = {"family": [x.to_dict(lang) for x in fam], "generator": gen}
                if n in replay_pick and replay and not _replay_witness_sets(rel, fam, U, res):
                    replay = False
                    bad_replay = {"family": [x.to_dict(lang) for x in fam], "generator": gen}
    rep.add("closed", closed, bad_closed, {"ultraproducts": count})
    rep.add("consistency preserved", consistent, bad_cons)
    rep.add("principal identity", principal, bad_principal)
    rep.add("witness-set replay", replay, bad_replay)

    bullets_ok, bad_bullet, tried = True, None, 0
    small = [(p, s) for p in range(1 << lang.n) for s in range(1 << lang.n)
             if bin(p).count("1") + bin(s).count("1") <= 3 and not rel.holds(p, s)]
    for p, s in rng.sample(small, min(len(small), 25)):
        tried += 1
        if not _replay_bullet_sets(rel, p, s):
            bullets_ok, bad_bullet = False, {"asserted": lang.names(p), "denied": lang.names(s)}
            break
    rep.add("bullet-set replay", bullets_ok, bad_bullet, {"pairs": tried})
    rep.notes.append(
        "index sets are finite, so every ultrafilter is principal and closure is automatic; "
        "the non-finitary direction of the ultraproduct characterization is not reproducible "
        "at this scale"
    )
    return rep
