"""Finite languages, formula syntax, and the bitmask sentence-set algebra.

A :class:`Language` fixes an order on its sentences; sentence sets are then
plain ``int`` bitmasks, bit ``i`` standing for ``lang.sentences[i]``.

Grammar for generated languages (precedence from low to high)::

    formula ::= disj ( '->' formula )?        right-assoc, lowest
    disj    ::= conj ( '|' conj )*            left-assoc
    conj    ::= unary ( '&' unary )*          left-assoc
    unary   ::= '~' unary | atom | '(' formula ')'
    atom    ::= [a-zA-Z_][a-zA-Z0-9_]*
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from biconseq.errors import ParseError, PreconditionError

# symbol -> (arity, precedence, associativity)
GRAMMAR = {
    "->": (2, 1, "right"),
    "|": (2, 2, "left"),
    "&": (2, 3, "left"),
    "~": (1, 4, None),
}
ATOM_PREC = 5

IDENT = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*")
_TOKEN = re.compile(r"\s*(->|[|&~()]|[a-zA-Z_][a-zA-Z0-9_]*)")


@dataclass(frozen=True, slots=True)
class Sentence:
    """Immutable formula: an atom (``name`` set) or a compound (``connective`` set)."""

    name: str | None = None
    connective: str | None = None
    args: tuple[Sentence, ...] = ()

    @classmethod
    def atom(cls, name: str) -> Sentence:
        return cls(name=name)

    @classmethod
    def compound(cls, connective: str, args: Iterable[Sentence]) -> Sentence:
        args = tuple(args)
        if connective not in GRAMMAR:
            raise ParseError(f"unknown connective {connective!r}")
        arity = GRAMMAR[connective][0]
        if len(args) != arity:
            raise ParseError(
                f"arity mismatch: {connective!r} takes {arity} argument(s), got {len(args)}"
            )
        return cls(connective=connective, args=args)

    @property
    def is_atom(self) -> bool:
        return self.connective is None

    @property
    def depth(self) -> int:
        if self.is_atom:
            return 0
        return 1 + max(a.depth for a in self.args)

    def atoms(self) -> set[str]:
        if self.is_atom:
            return {self.name}
        return set().union(*(a.atoms() for a in self.args))

    def __str__(self) -> str:
        return format_sentence(self)

    def __repr__(self) -> str:
        return f"Sentence({format_sentence(self)!r})"


def _prec(s: Sentence) -> int:
    return ATOM_PREC if s.is_atom else GRAMMAR[s.connective][1]


def format_sentence(s: Sentence) -> str:
    """Render with the fewest parentheses that still parse back to ``s``."""
    if s.is_atom:
        return s.name
    arity, prec, assoc = GRAMMAR[s.connective]
    if arity == 1:
        (arg,) = s.args
        inner = format_sentence(arg)
        return f"~{inner}" if _prec(arg) >= prec else f"~({inner})"
    left, right = s.args
    lt, rt = format_sentence(left), format_sentence(right)
    if _prec(left) < prec or (left.connective == s.connective and assoc == "right"):
        lt = f"({lt})"
    if _prec(right) < prec or (right.connective == s.connective and assoc == "left"):
        rt = f"({rt})"
    return f"{lt} {s.connective} {rt}"


@dataclass(frozen=True)
class LanguageSpec:
    """How to build a language: an explicit name list, or atoms + connectives + depth."""

    mode: str
    names: tuple[str, ...] = ()
    atoms: tuple[str, ...] = ()
    connectives: tuple[tuple[str, int], ...] = ()
    depth: int = 0

    def __post_init__(self):
        if self.mode == "explicit":
            if not self.names:
                raise PreconditionError("explicit language must be non-empty")
            if len(set(self.names)) != len(self.names):
                raise PreconditionError("explicit sentence names must be distinct")
            for name in self.names:
                if not name or name != name.strip() or any(t in name for t in (",", "|-")):
                    raise PreconditionError(f"invalid sentence name {name!r}")
        elif self.mode == "generated":
            if not self.atoms:
                raise PreconditionError("generated language needs at least one atom")
            if len(set(self.atoms)) != len(self.atoms):
                raise PreconditionError("atoms must be distinct")
            for a in self.atoms:
                if not IDENT.fullmatch(a):
                    raise PreconditionError(f"invalid atom name {a!r}")
            seen = set()
            for sym, arity in self.connectives:
                if sym not in GRAMMAR:
                    raise PreconditionError(f"unknown connective {sym!r}")
                if GRAMMAR[sym][0] != arity:
                    raise PreconditionError(
                        f"arity mismatch: {sym!r} has arity {GRAMMAR[sym][0]}, declared {arity}"
                    )
                if sym in seen:
                    raise PreconditionError(f"connective {sym!r} declared twice")
                seen.add(sym)
            if self.depth < 0:
                raise PreconditionError("depth must be non-negative")
        else:
            raise PreconditionError(f"unknown language mode {self.mode!r}")

    @classmethod
    def explicit(cls, names: Iterable[str]) -> LanguageSpec:
        return cls(mode="explicit", names=tuple(names))

    @classmethod
    def generated(
        cls,
        atoms: Iterable[str],
        connectives: Iterable[tuple[str, int]] = (),
        depth: int = 0,
    ) -> LanguageSpec:
        return cls(
            mode="generated",
            atoms=tuple(atoms),
            connectives=tuple((s, int(a)) for s, a in connectives),
            depth=int(depth),
        )

    @property
    def symbols(self) -> set[str]:
        return {s for s, _ in self.connectives}

    # -- language file format -------------------------------------------

    def to_text(self) -> str:
        if self.mode == "explicit":
            return "@explicit\n" + "".join(f"{n}\n" for n in self.names)
        conns = ",".join(f"{s}:{a}" for s, a in self.connectives)
        return (
            f"@generated atoms={','.join(self.atoms)} "
            f"connectives={conns} depth={self.depth}\n"
        )

    @classmethod
    def from_text(cls, text: str) -> LanguageSpec:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ParseError("empty language file")
        head = lines[0]
        if head == "@explicit":
            return cls.explicit(lines[1:])
        if head.startswith("@generated"):
            if len(lines) > 1:
                raise ParseError("unexpected lines after @generated header")
            fields = {}
            for tok in head.split()[1:]:
                key, sep, value = tok.partition("=")
                if not sep or key not in ("atoms", "connectives", "depth"):
                    raise ParseError(f"bad @generated field {tok!r}")
                fields[key] = value
            atoms = [a for a in fields.get("atoms", "").split(",") if a]
            conns = []
            for item in filter(None, fields.get("connectives", "").split(",")):
                sym, sep, arity = item.rpartition(":")
                if not sep or not arity.isdigit():
                    raise ParseError(f"bad connective declaration {item!r}")
                conns.append((sym, int(arity)))
            try:
                depth = int(fields.get("depth", "0"))
            except ValueError:
                raise ParseError(f"bad depth {fields['depth']!r}") from None
            return cls.generated(atoms, conns, depth)
        raise ParseError(f"unknown language header {head!r}")


@dataclass(frozen=True, eq=False)
class Language:
    spec: LanguageSpec
    sentences: tuple[Sentence, ...]
    index: dict[Sentence, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def __eq__(self, other) -> bool:
        return isinstance(other, Language) and self.sentences == other.sentences

    def __hash__(self) -> int:
        return hash(self.sentences)

    @property
    def n(self) -> int:
        return len(self.sentences)

    @property
    def full(self) -> int:
        return (1 << len(self.sentences)) - 1

    def bit(self, s: Sentence | str) -> int:
        return 1 << self.position(s)

    def position(self, s: Sentence | str) -> int:
        if isinstance(s, str):
            s = self.lookup(s)
        try:
            return self.index[s]
        except KeyError:
            raise ParseError(f"sentence {format_sentence(s)!r} is not in the language") from None

    def lookup(self, text: str) -> Sentence:
        """Resolve user text to a sentence of this language."""
        text = text.strip()
        if self.spec.mode == "explicit":
            s = Sentence.atom(text)
            if s not in self.index:
                raise ParseError(f"unknown sentence {text!r}")
            return s
        s = parse_sentence(text, self.spec)
        if s not in self.index:
            raise ParseError(f"sentence {text!r} exceeds the language depth bound")
        return s

    def mask(self, items: Iterable[Sentence | str]) -> int:
        m = 0
        for s in items:
            m |= self.bit(s)
        return m

    def parse_set(self, text: str) -> int:
        """Comma-separated sentences -> mask. Blank text is the empty set."""
        return self.mask(t for t in text.split(",") if t.strip())

    def members(self, mask: int) -> list[Sentence]:
        return [s for i, s in enumerate(self.sentences) if mask >> i & 1]

    def names(self, mask: int) -> list[str]:
        return [format_sentence(s) for s in self.members(mask)]

    def format_set(self, mask: int) -> str:
        return "{" + ", ".join(self.names(mask)) + "}"

    def complement(self, mask: int) -> int:
        return self.full & ~mask


def _generate(spec: LanguageSpec) -> list[Sentence]:
    out = [Sentence.atom(a) for a in spec.atoms]
    depth_of = [0] * len(out)
    for d in range(1, spec.depth + 1):
        pool = len(out)
        layer = []
        for sym, arity in spec.connectives:
            for combo in itertools.product(range(pool), repeat=arity):
                if max(depth_of[i] for i in combo) != d - 1:
                    continue
                layer.append(Sentence(connective=sym, args=tuple(out[i] for i in combo)))
        out.extend(layer)
        depth_of.extend([d] * len(layer))
    return out


def enumerate_language(spec: LanguageSpec) -> Language:
    """Build the language; deterministic order (atoms, then by depth/connective/args)."""
    if spec.mode == "explicit":
        sentences = [Sentence.atom(n) for n in spec.names]
    else:
        sentences = _generate(spec)
    if not sentences:
        raise PreconditionError("language must be non-empty")
    return Language(spec, tuple(sentences), {s: i for i, s in enumerate(sentences)})


def complement(s: int, lang: Language) -> int:
    return lang.full & ~s


# -- parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, spec: LanguageSpec):
        self.text = text
        self.spec = spec
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                col = len(text) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[col]!r}", col)
            self.tokens.append((m.group(1), m.start(1)))
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        pos = self.pos()
        got = self.take()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}", pos)

    def connective(self, sym: str) -> None:
        if sym not in self.spec.symbols:
            raise ParseError(f"connective {sym!r} not declared in the language", self.pos())

    def parse(self) -> Sentence:
        if not self.tokens:
            raise ParseError("empty formula", 0)
        s = self.formula()
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r}", self.pos())
        return s

    def formula(self) -> Sentence:
        left = self.disj()
        if self.peek() == "->":
            self.connective("->")
            self.take()
            return Sentence(connective="->", args=(left, self.formula()))
        return left

    def _left_assoc(self, sym: str, sub) -> Sentence:
        left = sub()
        while self.peek() == sym:
            self.connective(sym)
            self.take()
            left = Sentence(connective=sym, args=(left, sub()))
        return left

    def disj(self) -> Sentence:
        return self._left_assoc("|", self.conj)

    def conj(self) -> Sentence:
        return self._left_assoc("&", self.unary)

    def unary(self) -> Sentence:
        pos = self.pos()
        tok = self.take()
        if tok == "~":
            if "~" not in self.spec.symbols:
                raise ParseError("connective '~' not declared in the language", pos)
            return Sentence(connective="~", args=(self.unary(),))
        if tok == "(":
            s = self.formula()
            self.expect(")")
            return s
        if IDENT.fullmatch(tok):
            if tok not in self.spec.atoms:
                raise ParseError(f"unknown atom {tok!r}", pos)
            return Sentence.atom(tok)
        raise ParseError(f"unexpected token {tok!r}", pos)


def parse_sentence(text: str, spec: LanguageSpec) -> Sentence:
    if spec.mode != "generated":
        raise PreconditionError("formula parsing needs a generated language spec")
    return _Parser(text, spec).parse()
