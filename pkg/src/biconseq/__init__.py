"""Bilateral (Set-Set) consequence over finite propositional languages."""

from biconseq.errors import (
    BiconseqError,
    CapExceeded,
    InvariantError,
    ParseError,
    PreconditionError,
)
from biconseq.sentences import (
    Language,
    LanguageSpec,
    Sentence,
    complement,
    enumerate_language,
    format_sentence,
    parse_sentence,
)
from biconseq.semantics import Semantics, all_valuations, conj_closure, val_of
from biconseq.consequence import (
    Compatibility,
    ExtensionalConsequence,
    SemanticConsequence,
    assertion_T,
    denial_T,
    t_closure,
)
from biconseq.operators import TheoryPair, c2

__version__ = "0.1.0"

__all__ = [
    "BiconseqError",
    "CapExceeded",
    "Compatibility",
    "ExtensionalConsequence",
    "InvariantError",
    "Language",
    "LanguageSpec",
    "ParseError",
    "PreconditionError",
    "Semantics",
    "SemanticConsequence",
    "Sentence",
    "TheoryPair",
    "all_valuations",
    "assertion_T",
    "c2",
    "complement",
    "conj_closure",
    "denial_T",
    "enumerate_language",
    "format_sentence",
    "parse_sentence",
    "t_closure",
    "val_of",
]
