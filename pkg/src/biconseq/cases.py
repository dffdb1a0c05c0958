"""Worked examples as parametric fixtures.

Each constructor returns a :class:`CaseStudy` whose ``expected`` entries are
lazy checks; ``evaluate()`` runs them. Infinite examples are truncated and the
truncation parameters are carried along in ``params``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from biconseq.consequence import (
    SemanticConsequence,
    SemanticT,
    assertion_T,
    max_counterpart,
    min_counterpart_holds,
    parse_schemas,
    s_conseq_least,
    t_closure,
    witness_sizes,
)
from biconseq.errors import PreconditionError
from biconseq.operators import FinitaryProbe, TheoryPair, c2, c2_by_models
from biconseq.semantics import Semantics, conj_closure, conj_combination
from biconseq.sentences import Language, LanguageSpec, Sentence, enumerate_language
from biconseq.theories import is_consistent_pair

BOOLEAN = {
    "->": lambda a, b: (not a) or b,
    "|": lambda a, b: a or b,
    "&": lambda a, b: a and b,
    "~": lambda a: not a,
}

IMPLICATION_SCHEMAS = """\
A, A -> B |- B
B |- A -> B
|- A, A -> B
"""


@dataclass(frozen=True)
class Expectation:
    name: str
    check: Callable[[], tuple[bool, object]]


@dataclass
class CaseStudy:
    name: str
    params: dict
    language: Language
    semantics: Semantics
    expected: list[Expectation] = field(default_factory=list)

    @property
    def rel(self) -> SemanticConsequence:
        return SemanticConsequence(self.semantics)

    def expect(self, name: str):
        def deco(fn):
            self.expected.append(Expectation(name, fn))
            return fn
        return deco

    def evaluate(self) -> list[dict]:
        out = []
        for e in self.expected:
            ok, detail = e.check()
            out.append({"name": e.name, "status": "pass" if ok else "fail", "detail": detail})
        return out

    def ok(self) -> bool:
        return all(r["status"] == "pass" for r in self.evaluate())


def boolean_semantics(lang: Language) -> Semantics:
    """All valuations obeying the Boolean tables, one per atom assignment."""
    atoms = [i for i, s in enumerate(lang.sentences) if s.is_atom]
    compounds = [(i, s, [lang.position(a) for a in s.args])
                 for i, s in enumerate(lang.sentences) if not s.is_atom]
    vals = []
    for bits in itertools.product((0, 1), repeat=len(atoms)):
        v = sum(1 << i for i, b in zip(atoms, bits) if b)
        # compounds follow their arguments in language order
        for i, s, args in compounds:
            if BOOLEAN[s.connective](*(bool(v >> a & 1) for a in args)):
                v |= 1 << i
        vals.append(v)
    return Semantics(lang, vals)


def _names(lang: Language, mask: int) -> list[str]:
    return lang.names(mask)


def _mask(lang: Language, *texts: str) -> int:
    return lang.mask(lang.lookup(t) for t in texts)


def _atoms_arg(atoms) -> tuple[str, ...]:
    if isinstance(atoms, str):
        atoms = [a.strip() for a in atoms.split(",") if a.strip()]
    atoms = tuple(atoms)
    if not atoms:
        raise PreconditionError("at least one atom is required")
    return atoms


# -- implication fragment ---------------------------------------------------------


def cpl_implication(atoms=("p", "q"), depth: int = 1) -> CaseStudy:
    atoms = _atoms_arg(atoms)
    lang = enumerate_language(LanguageSpec.generated(atoms, [("->", 2)], depth))
    V = boolean_semantics(lang)
    case = CaseStudy("cpl_implication", {"atoms": list(atoms), "depth": depth}, lang, V)
    rel = case.rel
    a, b = atoms[0], atoms[1] if len(atoms) > 1 else atoms[0]
    imp = f"{a} -> {b}"

    if depth >= 1:
        @case.expect(f"{a}, {imp} |- {b}")
        def _():
            return rel.holds(_mask(lang, a, imp), _mask(lang, b)), None

        @case.expect(f"{b} |- {imp}")
        def _():
            return rel.holds(_mask(lang, b), _mask(lang, imp)), None

        @case.expect(f"|- {a}, {imp}")
        def _():
            return rel.holds(0, _mask(lang, a, imp)), None

    @case.expect("least relation of the three schemas equals the Boolean one")
    def _():
        least = s_conseq_least(parse_schemas(IMPLICATION_SCHEMAS, lang), lang)
        return least.semantics == V, {"least": len(least.semantics), "boolean": len(V)}

    return case


# -- disjunction ------------------------------------------------------------------


def cpl_disjunction(atoms=("p", "q"), depth: int = 1) -> CaseStudy:
    atoms = _atoms_arg(atoms)
    if len(atoms) < 2:
        raise PreconditionError("the disjunction case needs two atoms")
    lang = enumerate_language(LanguageSpec.generated(atoms, [("->", 2), ("|", 2)], depth))
    V = boolean_semantics(lang)
    case = CaseStudy("cpl_disjunction", {"atoms": list(atoms), "depth": depth}, lang, V)
    rel = case.rel
    a, b = atoms[:2]
    disj = f"{a} | {b}"
    target = (_mask(lang, disj), _mask(lang, a, b))
    trel = assertion_T(rel)

    @case.expect(f"{disj} |- {a}, {b}")
    def _():
        return rel.holds(*target), None

    @case.expect(f"{disj} |- {a}, {b} is not in the minimum counterpart")
    def _():
        return not min_counterpart_holds(trel, target), None

    @case.expect(f"{disj} |- {a}, {b} is in the maximum counterpart")
    def _():
        mx = max_counterpart(trel, lang)
        return mx is not None and mx.holds(*target), {"present": mx is not None}

    @case.expect(f"{a} |- {disj}")
    def _():
        return rel.holds(_mask(lang, a), _mask(lang, disj)), None

    return case


# -- the H example ----------------------------------------------------------------


def h_example(N: int = 3) -> CaseStudy:
    """H may be false only if every number is true; nothing else is assumed."""
    if N < 1:
        raise PreconditionError("N must be at least 1")
    nums = [str(n) for n in range(N)]
    lang = enumerate_language(LanguageSpec.explicit(nums + ["H"]))
    h = lang.bit("H")
    nat = lang.full & ~h
    V = Semantics(lang, (v for v in range(1 << lang.n) if v & h or v & nat == nat))
    case = CaseStudy("h_example", {"N": N}, lang, V)
    rel = case.rel

    @case.expect("closure of (0, {H}) is (N, {H})")
    def _():
        got = c2(rel, 0, h)
        return got == TheoryPair(nat, h), got.to_dict(lang)

    @case.expect("closure of (G, 0) is (G, 0) for every proper G")
    def _():
        for g in range(nat + 1):
            if g & ~nat or g == nat:
                continue
            if c2(rel, g, 0) != TheoryPair(g, 0):
                return False, {"G": lang.names(g)}
        return True, None

    @case.expect("|- n, H for each n")
    def _():
        bad = [n for n in nums if not rel.holds(0, _mask(lang, n, "H"))]
        return not bad, bad or None

    @case.expect("(0, {H}) is consistent")
    def _():
        c = is_consistent_pair(rel, 0, h)
        return c.consistent, {"witness": None if c.witness is None else lang.names(c.witness)}

    @case.expect("least relation of the instances equals the semantics")
    def _():
        least = s_conseq_least([(0, lang.bit(n) | h) for n in nums], lang)
        return least.semantics == V, None

    return case


# -- the E example ----------------------------------------------------------------


def exists_example(N: int = 3) -> CaseStudy:
    """Every valuation except the one asserting E alone."""
    if N < 2:
        raise PreconditionError("N must be at least 2")
    nums = [str(n) for n in range(N)]
    lang = enumerate_language(LanguageSpec.explicit(nums + ["E"]))
    e = lang.bit("E")
    nat = lang.full & ~e
    V = Semantics(lang, (v for v in range(1 << lang.n) if v != e))
    case = CaseStudy("exists_example", {"N": N}, lang, V)
    rel = case.rel
    trel = assertion_T(rel)

    @case.expect("E |- N")
    def _():
        return rel.holds(e, nat), None

    @case.expect("E does not entail any proper subset of N, witnessed by v_Psi")
    def _():
        for psi in range(nat):
            if psi & ~nat:
                continue
            v_psi = e | (nat & ~psi)
            if rel.holds(e, psi) or v_psi not in V:
                return False, {"Psi": lang.names(psi)}
            if not (e & ~v_psi == 0 and psi & v_psi == 0):
                return False, {"Psi": lang.names(psi)}
        return True, None

    @case.expect("induced T-relation is minimal")
    def _():
        bad = [g for g in range(1 << lang.n) if t_closure(trel, g) != g]
        return not bad, None if not bad else {"Gamma": lang.names(bad[0])}

    @case.expect("v_E lies in the conjunctive closure and is the meet of the v_{n}")
    def _():
        family = [e | (nat & ~lang.bit(n)) for n in nums]
        meet = conj_combination(family, lang)
        return meet == e and e in conj_closure(V), {"meet": lang.names(meet)}

    return case


def exists_probe(N: int) -> FinitaryProbe:
    case = exists_example(N)
    lang = case.language
    e = lang.bit("E")
    rel = case.rel
    return FinitaryProbe(
        rel,
        s_targets=[(e, lang.full & ~e)],
        t_targets=[(lang.full, a) for a in range(lang.n)],
    )


def implication_probe(N: int) -> FinitaryProbe:
    """CPL implication with N atoms at depth 1; every holding target is small."""
    atoms = [f"p{i}" for i in range(N)]
    case = cpl_implication(atoms, 1)
    lang = case.language
    first = lang.bit(atoms[0])
    imp = lang.bit(f"{atoms[0]} -> {atoms[-1]}")
    return FinitaryProbe(
        case.rel,
        s_targets=[(first | imp, lang.bit(atoms[-1]))],
        t_targets=[(first | imp, lang.position(atoms[-1]))],
    )


# -- the theory pair anti-axiomatized by q -----------------------------------------


def q_denied_theory(atoms=("p", "q"), depth: int = 1, samples: int = 20,
                    seed: int = 0) -> CaseStudy:
    atoms = _atoms_arg(atoms)
    if "q" not in atoms:
        raise PreconditionError("atom q must be declared")
    if depth < 1:
        raise PreconditionError("depth must be at least 1")
    lang = enumerate_language(LanguageSpec.generated(atoms, [("->", 2)], depth))
    V = boolean_semantics(lang)
    params = {"atoms": list(atoms), "depth": depth}
    case = CaseStudy("q_denied_theory", params, lang, V)
    rel = case.rel
    q = lang.bit("q")
    pair = c2(rel, 0, q)
    T1, T0 = pair
    q_imps = lang.mask(s for s in lang.sentences
                       if not s.is_atom and s.args[0] == Sentence.atom("q"))
    case.params["theory_pair"] = pair.to_dict(lang)

    @case.expect("T1 contains q -> A for every A")
    def _():
        return q_imps & ~T1 == 0, None

    @case.expect("T0 is what every model denying q denies")
    def _():
        return c2_by_models(rel, 0, q) == pair, None

    @case.expect("T1 is the T-closure of the q -> A")
    def _():
        return t_closure(assertion_T(rel), q_imps) == T1, None

    if len(atoms) >= 3:
        @case.expect(f"{samples} sampled finite Psi inside T1 are separated from T1")
        def _():
            return _separations(lang, V, T1, atoms, samples, seed)

    return case


def _mentions(s: Sentence) -> set[str]:
    return s.atoms()


def _separations(lang: Language, V: Semantics, T1: int, atoms, samples: int, seed: int):
    rng = random.Random(seed)
    T = SemanticT(V)
    others = [a for a in atoms if a != "q"]
    members = lang.members(T1)
    rows = []
    for _ in range(samples):
        r = rng.choice(others)
        pool = [s for s in members if r not in _mentions(s)]
        psi_list = rng.sample(pool, rng.randint(1, min(4, len(pool))))
        psi = lang.mask(psi_list)
        # r false, every other atom true
        sep = boolean_value(lang, {a: a != r for a in atoms})
        qr = lang.bit(f"q -> {r}")
        certified = (
            sep in V and psi & ~sep == 0 and not sep & qr and T1 & qr
            and t_closure(T, psi) != T1
        )
        rows.append({"psi": lang.names(psi), "r": r, "certified": bool(certified)})
    return all(r["certified"] for r in rows), rows


def boolean_value(lang: Language, assignment: dict[str, bool]) -> int:
    v = 0
    for i, s in enumerate(lang.sentences):
        if s.is_atom:
            bit = assignment[s.name]
        else:
            bit = BOOLEAN[s.connective](*(bool(v >> lang.position(a) & 1) for a in s.args))
        if bit:
            v |= 1 << i
    return v


CASES: dict[str, Callable[..., CaseStudy]] = {
    "cpl_implication": cpl_implication,
    "cpl_disjunction": cpl_disjunction,
    "h_example": h_example,
    "exists_example": exists_example,
    "q_denied_theory": q_denied_theory,
}


def build_case(name: str, params: dict[str, str] | None = None) -> CaseStudy:
    if name not in CASES:
        raise PreconditionError(f"unknown case {name!r}; known: {', '.join(sorted(CASES))}")
    kwargs = {}
    for k, v in (params or {}).items():
        if k in ("N", "depth", "samples", "seed"):
            try:
                kwargs[k] = int(v)
            except ValueError:
                raise PreconditionError(f"parameter {k} must be an integer, got {v!r}") from None
        elif k == "atoms":
            kwargs[k] = v
        else:
            raise PreconditionError(f"unknown parameter {k!r} for case {name}")
    try:
        return CASES[name](**kwargs)
    except TypeError as exc:
        raise PreconditionError(f"bad parameters for {name}: {exc}") from None
