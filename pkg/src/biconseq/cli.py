"""Command-line front end: ``biconseq <command> [options]``.

Exit codes: 0 success, 1 usage or parse error, 2 precondition violation,
3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import cmd
import csv
import json
import sys
from pathlib import Path

from biconseq import suite
from biconseq.cases import CASES, build_case, exists_probe, implication_probe
from biconseq.config import set_cap
from biconseq.consequence import (
    Compatibility,
    ExtensionalConsequence,
    ExtensionalT,
    SemanticConsequence,
    SemanticT,
    assertion_T,
    check_compat_axioms,
    check_S_axioms,
    check_T_axioms,
    format_consecution,
    max_counterpart,
    min_counterpart,
    parse_consecution,
    s_conseq_least,
)
from biconseq.errors import BiconseqError, ParseError, PreconditionError
from biconseq.io import (
    load_consecutions,
    load_language,
    load_schemas,
    load_semantics,
    write_language,
    write_semantics,
)
from biconseq.operators import (
    TheoryPair,
    c2,
    check_c2_axioms,
    check_finitariness,
    check_prop1,
    operator_of,
)
from biconseq.semantics import Semantics, all_valuations, val_of
from biconseq.theories import (
    check_ultraproduct_closure,
    enumerate_theory_pairs,
    is_consistent_pair,
    ultrafilter_principal,
    ultraproduct,
)

PROBES = {"exists": exists_probe, "implication": implication_probe}


class UsageError(BiconseqError):
    exit_code = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- loading ----------------------------------------------------------------------


class Context:
    """The language, semantics and provenance shared by every command."""

    def __init__(self, lang, semantics: Semantics, params: dict):
        self.lang = lang
        self.semantics = semantics
        self.params = params

    @property
    def rel(self) -> SemanticConsequence:
        return SemanticConsequence(self.semantics)


def _params(args) -> dict:
    out = {}
    for item in getattr(args, "param", None) or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects K=V, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def load_context(args, required: bool = True) -> Context | None:
    params = {}
    case = getattr(args, "case", None)
    lang_path = getattr(args, "lang", None)
    sem_path = getattr(args, "sem", None)
    schemas = getattr(args, "schemas", None)
    if case:
        cs = build_case(case, _params(args))
        params = {"case": case, **cs.params}
        return Context(cs.language, cs.semantics, params)
    lang = load_language(lang_path) if lang_path else None
    if lang_path:
        params["lang"] = lang_path
    if sem_path:
        params["sem"] = sem_path
        V = load_semantics(sem_path, lang)
        return Context(V.lang, V, params)
    if schemas:
        if lang is None:
            raise UsageError("--schemas needs --lang")
        params["schemas"] = schemas
        rel = s_conseq_least(load_schemas(schemas, lang), lang)
        return Context(lang, rel.semantics, params)
    if lang is not None:
        return Context(lang, all_valuations(lang), params)
    if required:
        raise UsageError("give --case, --sem, --schemas or --lang")
    return None


def _pair_dict(lang, x: TheoryPair) -> dict:
    return {"theorems": lang.names(x.theorems), "antitheorems": lang.names(x.antitheorems)}


def _valuation_dict(lang, v: int) -> dict:
    return {"asserted": lang.names(v), "denied": lang.names(lang.full & ~v)}


def emit(args, command: str, result, params: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"command": command, "result": result, "params": params},
                         indent=2, sort_keys=True))
    else:
        print(text)


# -- commands ---------------------------------------------------------------------


def cmd_entails(args) -> int:
    ctx = load_context(args)
    c = parse_consecution(args.consecution, ctx.lang)
    rel = ctx.rel
    ok = rel.holds(*c)
    cm = None if ok else rel.countermodel(*c)
    result = {"consecution": format_consecution(c, ctx.lang), "holds": ok,
              "countermodel": None if cm is None else _valuation_dict(ctx.lang, cm)}
    text = "holds" if ok else f"fails; countermodel asserts {ctx.lang.format_set(cm)}"
    emit(args, "entails", result, ctx.params, text)
    return 0


def cmd_closure(args) -> int:
    ctx = load_context(args)
    g1 = ctx.lang.parse_set(args.assert_)
    g0 = ctx.lang.parse_set(args.deny)
    rel = ctx.rel
    x = c2(rel, g1, g0)
    verdict = is_consistent_pair(rel, g1, g0)
    result = dict(_pair_dict(ctx.lang, x), consistent=verdict.consistent)
    if verdict.consistent:
        text = (f"theorems: {', '.join(ctx.lang.names(x.theorems))}\n"
                f"anti-theorems: {', '.join(ctx.lang.names(x.antitheorems))}\nconsistent")
    else:
        text = "INCONSISTENT (L, L)"
    emit(args, "closure", result, ctx.params, text)
    return 0


def _tcons(path, lang):
    """Singleton-conclusion consecutions read as generators of a T-relation."""
    pairs = []
    for pi, sigma in load_consecutions(path, lang):
        if bin(sigma).count("1") != 1:
            raise ParseError(f"{path}: T-consecutions need exactly one conclusion")
        pairs.append((pi, sigma.bit_length() - 1))
    return ExtensionalT.from_pairs(lang, pairs)


def cmd_check(args) -> int:
    what = args.what
    params = {}
    if what == "finitary":
        sizes = _sizes(args.sizes)
        if args.family not in PROBES:
            raise UsageError(f"--family must be one of {', '.join(sorted(PROBES))}")
        res = check_finitariness(PROBES[args.family], sizes)
        params = {"family": args.family, "sizes": sizes}
        lines = [f"S denied-side witnesses by N: {res['s_denied_witness_by_N']} ({res['s_trend']})",
                 f"T premise witnesses by N: {res['t_premise_witness_by_N']} ({res['t_trend']})",
                 f"note: {res['note']}"]
        emit(args, "check finitary", res, params, "\n".join(lines))
        return 0

    relation = getattr(args, "relation", None)
    tcons = getattr(args, "tcons", None)
    if relation or tcons:
        lang = load_language(args.lang) if getattr(args, "lang", None) else None
        if lang is None:
            raise UsageError("--relation and --tcons need --lang")
        params = {"lang": args.lang, "relation": relation, "tcons": tcons}
        if what in ("s-axioms", "compat-axioms") and not relation:
            raise UsageError(f"check {what} needs --relation")
        if what == "s-axioms":
            rep = check_S_axioms(ExtensionalConsequence.from_consecutions(lang, load_consecutions(relation, lang)))
        elif what == "compat-axioms":
            rep = check_compat_axioms(Compatibility.from_consecutions(lang, load_consecutions(relation, lang)))
        elif what == "t-axioms":
            if not tcons:
                raise UsageError("t-axioms needs --tcons")
            rep = check_T_axioms(_tcons(tcons, lang))
        else:
            raise UsageError(f"check {what} works on a loaded semantics, not --relation")
    else:
        ctx = load_context(args)
        params = ctx.params
        rel = ctx.rel
        if what == "s-axioms":
            rep = check_S_axioms(rel)
        elif what == "compat-axioms":
            rep = check_compat_axioms(Compatibility.from_semantics(ctx.semantics))
        elif what == "t-axioms":
            rep = check_T_axioms(assertion_T(rel))
        elif what == "prop1":
            rep = check_prop1(rel)
        else:
            rep = check_c2_axioms(operator_of(rel))
    emit(args, f"check {what}", rep.to_dict(), params, rep.to_text())
    return 0


def _sizes(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes {text!r}; use 2..6 or 2,3,4") from None


def _difference_witness(lang, mx: SemanticConsequence, mn: SemanticConsequence, limit: int = 3):
    """Smallest consecution in the maximum counterpart but not the minimum one."""
    size = 1 << lang.n
    cands = sorted(
        ((p, s) for p in range(size) for s in range(size)
         if bin(p).count("1") + bin(s).count("1") <= limit),
        key=lambda c: (bin(c[0]).count("1") + bin(c[1]).count("1"), c),
    ) if lang.n <= 10 else []
    for p, s in cands:
        if mx.holds(p, s) and not mn.holds(p, s):
            return format_consecution((p, s), lang)
    return None


def cmd_counterpart(args) -> int:
    if getattr(args, "tcons", None):
        if not getattr(args, "lang", None):
            raise UsageError("--tcons needs --lang")
        lang = load_language(args.lang)
        gens = _tcons(args.tcons, lang)
        trel = SemanticT(val_of(gens, lang, exhaustive=True))
        params = {"lang": args.lang, "tcons": args.tcons}
    else:
        ctx = load_context(args)
        lang, trel, params = ctx.lang, assertion_T(ctx.rel), ctx.params
    mn = min_counterpart(trel, lang)
    mx = max_counterpart(trel, lang)
    chosen = mn if args.which == "min" else mx
    result = {"which": args.which, "present": chosen is not None}
    if chosen is not None:
        result["valuations"] = [chosen.semantics.bitstring(v) for v in chosen.semantics]
    if mx is not None:
        result["difference_witness"] = _difference_witness(lang, mx, mn)
    lines = [f"{args.which} counterpart: " + ("absent" if chosen is None else
                                              f"{len(chosen.semantics)} valuations")]
    if chosen is not None:
        lines += ["  " + b for b in result["valuations"]]
    if result.get("difference_witness"):
        lines.append(f"in max but not min: {result['difference_witness']}")
    emit(args, f"counterpart {args.which}", result, params, "\n".join(lines))
    return 0


def cmd_theories(args) -> int:
    ctx = load_context(args)
    space = enumerate_theory_pairs(ctx.rel)
    rows = space.to_list()
    lines = []
    for x, r in zip(space, rows):
        flag = "  maximal" if r["maximal"] else ""
        lines.append(f"({ctx.lang.format_set(x.theorems)}, {ctx.lang.format_set(x.antitheorems)}){flag}")
    emit(args, "theories", rows, ctx.params, "\n".join(lines))
    return 0


def _parse_pair(text: str, lang) -> TheoryPair:
    left, sep, right = text.partition("/")
    if not sep:
        raise UsageError(f"--pair expects ASSERTED/DENIED, got {text!r}")
    return TheoryPair(lang.parse_set(left), lang.parse_set(right))


def cmd_ultraproduct(args) -> int:
    ctx = load_context(args)
    lang = ctx.lang
    if not args.pair:
        rep = check_ultraproduct_closure(ctx.rel, lang, max_index=args.max_index)
        emit(args, "ultraproduct", rep.to_dict(), ctx.params, rep.to_text())
        return 0
    family = [_parse_pair(p, lang) for p in args.pair]
    index = tuple(range(len(family)))
    gens = index if args.generator is None else (args.generator,)
    space = enumerate_theory_pairs(ctx.rel)
    rows, lines = [], []
    for g in gens:
        U = ultrafilter_principal(index, g)
        res = ultraproduct(family, U, lang)
        row = dict(_pair_dict(lang, res), generator=g, in_space=res in space,
                   consistent=is_consistent_pair(ctx.rel, *res).consistent)
        rows.append(row)
        lines.append(f"U at {g}: ({lang.format_set(res.theorems)}, {lang.format_set(res.antitheorems)})"
                     f"  in space: {row['in_space']}  consistent: {row['consistent']}")
    emit(args, "ultraproduct", rows, ctx.params, "\n".join(lines))
    return 0


def cmd_case(args) -> int:
    cs = build_case(args.name, _params(args))
    rows = cs.evaluate()
    files = {}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_language(out / f"{cs.name}.lang", cs.language)
        write_semantics(out / f"{cs.name}.sem", cs.semantics, f"{cs.name}.lang")
        files = {"language": str(out / f"{cs.name}.lang"), "semantics": str(out / f"{cs.name}.sem")}
    result = {"language_size": cs.language.n, "valuations": len(cs.semantics),
              "expectations": rows, "files": files}
    lines = [f"{cs.name} {cs.params}: |L|={cs.language.n}, {len(cs.semantics)} valuations"]
    lines += [f"  {r['status'].upper()}  {r['name']}" for r in rows]
    emit(args, "case", result, {"case": args.name, **cs.params}, "\n".join(lines))
    return 0 if all(r["status"] == "pass" for r in rows) else 3


def cmd_report(args) -> int:
    from biconseq import plotting

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = suite.run_all()
    (out / "acceptance.json").write_text(suite.to_json(results) + "\n", encoding="utf-8")
    with open(out / "criteria.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["criterion", "title", "passed"])
        for c in results["criteria"]:
            w.writerow([c["criterion"], c["title"], c["passed"]])

    sizes = list(range(2, 7))
    fin = check_finitariness(exists_probe, sizes)
    with open(out / "witness_trend.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["N", "s_denied_witness", "t_premise_witness"])
        for row in zip(sizes, fin["s_denied_witness_by_N"], fin["t_premise_witness_by_N"]):
            w.writerow(row)
    plotting.witness_trend(sizes, fin["s_denied_witness_by_N"], fin["t_premise_witness_by_N"],
                           out / "witness_trend.png")

    ctx = load_context(args, required=False)
    if ctx is None:
        ctx = Context(*_toy(), {"case": "cpl_implication", "atoms": ["p"], "depth": 1})
    space = enumerate_theory_pairs(ctx.rel)
    with open(out / "theories.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["theorems", "antitheorems", "maximal"])
        for r in space.to_list():
            w.writerow([";".join(r["theorems"]), ";".join(r["antitheorems"]), r["maximal"]])
    plotting.hasse(space, out / "lattice.png")

    files = sorted(p.name for p in out.iterdir())
    passed = all(c["passed"] for c in results["criteria"])
    lines = [f"criterion {c['criterion']}: {'PASS' if c['passed'] else 'FAIL'}  {c['title']}"
             for c in results["criteria"]]
    lines.append(f"wrote {', '.join(files)} to {out}")
    emit(args, "report", {"criteria": [{k: c[k] for k in ("criterion", "title", "passed")}
                                       for c in results["criteria"]], "files": files},
         dict(ctx.params, out=str(out)), "\n".join(lines))
    return 0 if passed else 3


def _toy():
    cs = CASES["cpl_implication"](("p",), 1)
    return cs.language, cs.semantics


# -- REPL -------------------------------------------------------------------------


class Session:
    """Raw asserted and denied sets; the closure is only ever a view."""

    def __init__(self, lang, semantics: Semantics):
        self.lang = lang
        self.semantics = semantics
        self.rel = SemanticConsequence(semantics)
        self.asserted = 0
        self.denied = 0
        self.history: list[tuple[int, int]] = []

    def _push(self):
        self.history.append((self.asserted, self.denied))

    def assert_(self, text: str) -> None:
        b = self.lang.parse_set(text)
        self._push()
        self.asserted |= b

    def deny(self, text: str) -> None:
        b = self.lang.parse_set(text)
        self._push()
        self.denied |= b

    def retract(self, text: str) -> None:
        b = self.lang.parse_set(text)
        self._push()
        self.asserted &= ~b
        self.denied &= ~b

    def undo(self) -> bool:
        if not self.history:
            return False
        self.asserted, self.denied = self.history.pop()
        return True

    def closed(self) -> TheoryPair:
        return c2(self.rel, self.asserted, self.denied)

    def consistent(self) -> bool:
        return is_consistent_pair(self.rel, self.asserted, self.denied).consistent

    def models(self) -> list[int]:
        return [v for v in self.semantics if self.asserted & ~v == 0 and self.denied & v == 0]

    def show(self) -> str:
        x = self.closed()
        if x == TheoryPair(self.lang.full, self.lang.full):
            return "INCONSISTENT (L, L)"
        return (f"theorems: {self.lang.format_set(x.theorems)}\n"
                f"anti-theorems: {self.lang.format_set(x.antitheorems)}")


class Repl(cmd.Cmd):
    prompt = "biconseq> "
    intro = "assert A | deny A | retract A | show | consistent? | models | undo | quit"

    def __init__(self, session: Session, stdin=None, stdout=None):
        super().__init__(stdin=stdin, stdout=stdout)
        if stdin is not None:
            # scripted input: no prompts in the transcript
            self.use_rawinput = False
            self.prompt = ""
        self.session = session

    def _say(self, text: str) -> None:
        self.stdout.write(text + "\n")

    def _mutate(self, fn, arg: str) -> None:
        try:
            fn(arg)
        except BiconseqError as exc:
            self._say(f"error: {exc}")
            return
        self._say(self.session.show())

    def do_assert(self, arg):
        self._mutate(self.session.assert_, arg)

    def do_deny(self, arg):
        self._mutate(self.session.deny, arg)

    def do_retract(self, arg):
        self._mutate(self.session.retract, arg)

    def do_show(self, arg):
        self._say(self.session.show())

    def do_consistent(self, arg):
        self._say("yes" if self.session.consistent() else "no")

    def do_models(self, arg):
        ms = self.session.models()
        for v in ms:
            self._say(f"{self.session.semantics.bitstring(v)}  {self.session.lang.format_set(v)}")
        self._say(f"{len(ms)} model(s)")

    def do_undo(self, arg):
        if self.session.undo():
            self._say(self.session.show())
        else:
            self._say("nothing to undo")

    def do_quit(self, arg):
        return True

    do_EOF = do_quit

    def emptyline(self):
        pass

    def default(self, line):
        self._say(f"unknown command: {line.split()[0]}")


def cmd_repl(args) -> int:
    ctx = load_context(args)
    piped = None if sys.stdin.isatty() else sys.stdin
    Repl(Session(ctx.lang, ctx.semantics), stdin=piped).cmdloop()
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--lang", metavar="FILE", help="language file")
    common.add_argument("--sem", metavar="FILE", help="semantics file")
    common.add_argument("--schemas", metavar="FILE", help="schema file (least relation)")
    common.add_argument("--case", metavar="NAME", help=f"built-in case: {', '.join(sorted(CASES))}")
    common.add_argument("--param", metavar="K=V", action="append", help="case parameter")
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--cap", type=int, metavar="N", help="enumeration cap")

    p = _Parser(prog="biconseq", description="Bilateral consequence over finite languages.",
                parents=[common])
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("entails", parents=[common], help="does a consecution hold?")
    s.add_argument("consecution", help='e.g. "p, p->q |- q"')
    s.set_defaults(fn=cmd_entails)

    s = sub.add_parser("closure", parents=[common], help="close an (asserted, denied) pair")
    s.add_argument("--assert", dest="assert_", default="", metavar="SET")
    s.add_argument("--deny", default="", metavar="SET")
    s.set_defaults(fn=cmd_closure)

    s = sub.add_parser("repl", parents=[common], help="interactive session")
    s.set_defaults(fn=cmd_repl)

    s = sub.add_parser("check", parents=[common], help="axiom and proposition checks")
    s.add_argument("what", choices=["s-axioms", "compat-axioms", "t-axioms", "prop1",
                                    "c2-axioms", "finitary"])
    s.add_argument("--relation", metavar="FILE", help="extensional consecutions file")
    s.add_argument("--tcons", metavar="FILE", help="T-consecutions file")
    s.add_argument("--family", default="exists", help="finitary: exists or implication")
    s.add_argument("--sizes", default="2..6", help="finitary: e.g. 2..6")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("counterpart", parents=[common], help="minimum or maximum counterpart")
    s.add_argument("which", choices=["min", "max"])
    s.add_argument("--tcons", metavar="FILE", help="T-consecutions generating the relation")
    s.set_defaults(fn=cmd_counterpart)

    s = sub.add_parser("theories", parents=[common], help="list the theory-pair space")
    s.set_defaults(fn=cmd_theories)

    s = sub.add_parser("ultraproduct", parents=[common], help="ultraproducts of theory pairs")
    s.add_argument("--pair", action="append", metavar="A/D", help='e.g. "p,q/" (repeatable)')
    s.add_argument("--generator", type=int, help="index of the principal ultrafilter")
    s.add_argument("--max-index", type=int, default=4)
    s.set_defaults(fn=cmd_ultraproduct)

    s = sub.add_parser("case", parents=[common], help="run a built-in case study")
    s.add_argument("name", choices=sorted(CASES))
    s.add_argument("--out", metavar="DIR", help="write language and semantics files here")
    s.set_defaults(fn=cmd_case)

    s = sub.add_parser("report", parents=[common], help="acceptance suite, CSV and figures")
    s.add_argument("--out", metavar="DIR", required=True)
    s.set_defaults(fn=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        set_cap(getattr(args, "cap", None))
        return args.fn(args)
    except BiconseqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    finally:
        set_cap(None)


if __name__ == "__main__":
    sys.exit(main())
