"""The acceptance criteria as deterministic, JSON-able checks.

``run_all()`` evaluates criteria 1-8 and returns a dict with no timings or
other run-dependent data, so two runs can be compared byte for byte
(criterion 9).
"""

from __future__ import annotations

import json
import random
from typing import Callable, Iterator

from biconseq.cases import (
    cpl_disjunction,
    cpl_implication,
    exists_example,
    exists_probe,
    h_example,
    q_denied_theory,
)
from biconseq.consequence import (
    Compatibility,
    ExtensionalConsequence,
    SemanticConsequence,
    SemanticT,
    assertion_T,
    check_compat_axioms,
    check_S_axioms,
)
from biconseq.operators import (
    TheoryPair,
    check_c2_axioms,
    check_finitariness,
    check_prop1,
    check_prop3,
    operator_of,
    s_conseq_from_operator,
)
from biconseq.semantics import Semantics, conj_closure, val_of
from biconseq.sentences import Language, LanguageSpec, enumerate_language
from biconseq.theories import (
    LEMMA_STATS,
    Ultrafilter,
    all_ultrafilters,
    assertion_projection,
    c2_image,
    check_lattice,
    check_ultraproduct_closure,
    enumerate_theory_pairs,
    is_consistent_pair,
    is_ultrafilter,
    maximal_pairs,
    reset_lemma_stats,
)

SEED = 20240611
RANDOM_L4_SAMPLES = 800
NAMES = ("a", "b", "c", "d")


def language(n: int) -> Language:
    return enumerate_language(LanguageSpec.explicit(NAMES[:n]))


def all_semantics(lang: Language) -> Iterator[Semantics]:
    """Every set of valuations over ``lang``, in mask order."""
    size = 1 << lang.n
    for fam in range(1 << size):
        yield Semantics(lang, (v for v in range(size) if fam >> v & 1))


def small_semantics(max_n: int = 3) -> Iterator[Semantics]:
    for n in range(1, max_n + 1):
        yield from all_semantics(language(n))


def sampled_semantics(n: int, count: int, seed: int = SEED) -> list[Semantics]:
    lang = language(n)
    size = 1 << lang.n
    rng = random.Random(seed)
    fams = rng.sample(range(1 << size), count)
    return [Semantics(lang, (v for v in range(size) if fam >> v & 1)) for fam in fams]


def _fmt(V: Semantics) -> list[str]:
    return [V.bitstring(v) for v in V]


def _sweep_lemma(rel) -> None:
    size = 1 << rel.lang.n
    for g1 in range(size):
        for g0 in range(size):
            is_consistent_pair(rel, g1, g0)


def _result(k: int, title: str, passed: bool, **details) -> dict:
    return {"criterion": k, "title": title, "passed": bool(passed), "details": details}


# -- 1 ---------------------------------------------------------------------------


def criterion_1() -> dict:
    failures = []
    counts = {"exhaustive_up_to_3": 0, "sampled_4": 0}
    pool = [(V, "exhaustive_up_to_3") for V in small_semantics(3)]
    pool += [(V, "sampled_4") for V in sampled_semantics(4, RANDOM_L4_SAMPLES)]
    for V, bucket in pool:
        counts[bucket] += 1
        rel = SemanticConsequence(V)
        s_rep = check_S_axioms(rel)
        c_rep = check_compat_axioms(Compatibility.from_semantics(V))
        if V.lang.n <= 3:
            _sweep_lemma(rel)
        if not (s_rep.ok and c_rep.ok) and len(failures) < 5:
            failures.append({
                "semantics": _fmt(V),
                "failed": [i.to_dict() for i in s_rep.failures() + c_rep.failures()],
            })
    total = sum(counts.values())
    return _result(1, "axiom suites", not failures and total >= 1000,
                   semantics_tested=total, counts=counts, failures=failures)


# -- 2 ---------------------------------------------------------------------------


def criterion_2() -> dict:
    failures = []
    tested = 0
    for V in small_semantics(3):
        tested += 1
        rel = SemanticConsequence(V)
        op = operator_of(rel)
        reports = {
            "prop1": check_prop1(rel),
            "prop3": check_prop3(rel),
            "c2-axioms": check_c2_axioms(op),
        }
        back = s_conseq_from_operator(op)
        round_trip = back.same_as(rel) and operator_of(back) == op
        _sweep_lemma(rel)
        bad = {k: [i.to_dict() for i in r.failures()] for k, r in reports.items() if not r.ok}
        if not round_trip:
            bad["round-trip"] = True
        if bad and len(failures) < 5:
            failures.append({"semantics": _fmt(V), "failed": bad})
    return _result(2, "proposition suite", not failures and tested >= 100,
                   semantics_tested=tested, counterexamples=len(failures), failures=failures)


# -- 3 ---------------------------------------------------------------------------


def criterion_3(stats: dict | None = None) -> dict:
    """Lemma agreement over the queries issued by criteria 1 and 2."""
    if stats is None:
        reset_lemma_stats()
        criterion_1()
        criterion_2()
        stats = dict(LEMMA_STATS)
    return _result(3, "consistency lemma", stats["disagreements"] == 0 and stats["queries"] > 0,
                   queries=stats["queries"], disagreements=stats["disagreements"])


# -- 4 ---------------------------------------------------------------------------


def criterion_4() -> dict:
    problems = []
    tested = 0
    for V in small_semantics(3):
        tested += 1
        lang = V.lang
        rel = SemanticConsequence(V)
        compat = Compatibility.from_semantics(V)
        ext = ExtensionalConsequence(lang, rel.table())
        val_s = val_of(rel)
        val_c = val_of(compat)
        checks = {
            "G1": V <= val_s and V <= val_c,
            "G1^S": val_s == V and val_of(ext) == V,
            "G1^compat": val_c == V,
            "G2": not (Compatibility.from_semantics(val_c).table() & ~compat.table()).any(),
            "G3": not (rel.table() & ~SemanticConsequence(val_s).table()).any(),
            "G3 converse": SemanticConsequence(val_of(ext)).same_as(ext),
            "Val(T) = V_cap": val_of(assertion_T(rel)) == conj_closure(V),
        }
        if lang.n <= 2:
            checks["exhaustive respect"] = val_of(rel, exhaustive=True) == val_s
        bad = [k for k, ok in checks.items() if not ok]
        if bad and len(problems) < 5:
            problems.append({"semantics": _fmt(V), "failed": bad})

    # the split semantics {p}, {q} over {p, q}
    lang = enumerate_language(LanguageSpec.explicit(["p", "q"]))
    p, q = lang.bit("p"), lang.bit("q")
    V = Semantics(lang, [p, q])
    val_t = val_of(assertion_T(SemanticConsequence(V)))
    expected = Semantics(lang, [p, q, 0, p | q])
    star = V | Semantics(lang, [lang.full])
    split = {
        "Val(T)": _fmt(val_t),
        "Val(T) = V_cap = V + {v_empty, v_top}": val_t == conj_closure(V) == expected,
        "absoluteness fails": V < val_t,
        "same T-relation with v_top added": all(
            SemanticT(V).closure(g) == SemanticT(star).closure(g) for g in range(1 << lang.n)
        ),
        "L |- {} only without v_top": SemanticConsequence(V).holds(lang.full, 0)
        and not SemanticConsequence(star).holds(lang.full, 0),
    }
    fine = all(v for k, v in split.items() if k != "Val(T)")
    return _result(4, "Galois connection and absoluteness", not problems and fine,
                   semantics_tested=tested, failures=problems, split=split)


# -- 5 ---------------------------------------------------------------------------


def criterion_5() -> dict:
    runs = {
        "implication depth 1": cpl_implication(("p", "q"), 1).evaluate(),
        "implication depth 2": cpl_implication(("p", "q"), 2).evaluate(),
        "disjunction": cpl_disjunction(("p", "q"), 1).evaluate(),
    }
    passed = all(r["status"] == "pass" for rows in runs.values() for r in rows)
    return _result(5, "implication and disjunction fixtures", passed, expectations=runs)


# -- 6 ---------------------------------------------------------------------------


def criterion_6() -> dict:
    h_rows = {N: h_example(N).evaluate() for N in range(1, 7)}
    e_rows = {N: exists_example(N).evaluate() for N in range(2, 7)}
    fin = check_finitariness(exists_probe, range(2, 7))
    witness_ok = fin["s_denied_witness_by_N"] == list(range(2, 7))
    t_ok = all(w <= 1 for w in fin["t_premise_witness_by_N"])
    exp_ok = all(r["status"] == "pass" for rows in (*h_rows.values(), *e_rows.values()) for r in rows)
    return _result(
        6, "truncated infinite examples", exp_ok and witness_ok and t_ok,
        h_example={str(k): v for k, v in h_rows.items()},
        exists_example={str(k): v for k, v in e_rows.items()},
        denied_witness_by_N=fin["s_denied_witness_by_N"],
        t_premise_witness_by_N=fin["t_premise_witness_by_N"],
        s_trend=fin["s_trend"], t_trend=fin["t_trend"],
    )


# -- 7 ---------------------------------------------------------------------------


def criterion_7() -> dict:
    case = q_denied_theory(("p", "q", "r"), 2, samples=20)
    rows = case.evaluate()
    sep = [r for r in rows if r["name"].startswith("20 sampled")]
    certified = sum(1 for x in sep[0]["detail"] if x["certified"]) if sep else 0
    passed = bool(sep) and certified == 20 and all(r["status"] == "pass" for r in rows)
    return _result(7, "non-axiomatizability of the q-denied theory", passed,
                   language_size=case.language.n, certified=certified,
                   samples=sep[0]["detail"] if sep else [])


# -- 8 ---------------------------------------------------------------------------


ULTRA_SAMPLE_L3 = 12
ULTRA_MAX_FAMILIES = 1500


def criterion_8() -> dict:
    problems = []
    tested = 0
    for V in small_semantics(3):
        tested += 1
        rel = SemanticConsequence(V)
        lang = V.lang
        space = enumerate_theory_pairs(rel)
        models = frozenset(TheoryPair(v, lang.full & ~v) for v in V)
        checks = {
            "enumeration = closure image": space.pairs == c2_image(rel),
            "maximal = model pairs": maximal_pairs(space) == models,
            "lattice": check_lattice(space).ok,
        }
        bad = [k for k, ok in checks.items() if not ok]
        if bad and len(problems) < 5:
            problems.append({"semantics": _fmt(V), "failed": bad})

    ultra_pool = list(small_semantics(2)) + sampled_semantics(3, ULTRA_SAMPLE_L3)
    ultra_fail = []
    for V in ultra_pool:
        rep = check_ultraproduct_closure(SemanticConsequence(V), max_index=4,
                                         max_families=ULTRA_MAX_FAMILIES)
        if not rep.ok and len(ultra_fail) < 5:
            ultra_fail.append({"semantics": _fmt(V), "failed": [i.to_dict() for i in rep.failures()]})
    toy = cpl_implication(("p",), 1)
    toy_rep = check_ultraproduct_closure(toy.rel, max_index=4)

    ufs = {str(k): all(
        len(U) == 1 << (k - 1) and any(all(i in X for X in U) for i in range(k))
        for U in all_ultrafilters(range(k))
    ) and len(all_ultrafilters(range(k))) == k for k in (1, 2, 3)}
    ufs["4"] = all(is_ultrafilter(range(4), Ultrafilter(tuple(range(4)), i).members()) for i in range(4))

    # same assertion projection, different spaces
    lang = enumerate_language(LanguageSpec.explicit(["p", "q"]))
    Vf = Semantics(lang, [lang.bit("p"), lang.bit("q")])
    Vs = Vf | Semantics(lang, [lang.full])
    sf = enumerate_theory_pairs(SemanticConsequence(Vf))
    ss = enumerate_theory_pairs(SemanticConsequence(Vs))
    projection = assertion_projection(sf) == assertion_projection(ss) and sf.pairs != ss.pairs

    passed = (not problems and not ultra_fail and toy_rep.ok and all(ufs.values()) and projection)
    return _result(
        8, "theory-pair spaces and ultraproducts", passed,
        semantics_tested=tested, failures=problems,
        ultraproduct_semantics=len(ultra_pool), ultraproduct_failures=ultra_fail,
        implication_toy=toy_rep.to_dict(), ultrafilters_principal=ufs,
        projection_vs_space=projection,
        note=toy_rep.notes[0],
    )


CRITERIA: dict[int, Callable[[], dict]] = {
    1: criterion_1, 2: criterion_2, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8,
}


def run_all() -> dict:
    reset_lemma_stats()
    results = {1: criterion_1(), 2: criterion_2()}
    results[3] = criterion_3(dict(LEMMA_STATS))
    for k in (4, 5, 6, 7, 8):
        results[k] = CRITERIA[k]()
    return {"criteria": [results[k] for k in sorted(results)]}


def to_json(results: dict) -> str:
    return json.dumps(results, indent=2, sort_keys=True)


def criterion_9(first: str | None = None) -> dict:
    """Two runs, byte-identical JSON."""
    a = first if first is not None else to_json(run_all())
    b = to_json(run_all())
    return _result(9, "determinism", a == b, bytes=len(a))
