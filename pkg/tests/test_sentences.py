import pytest
from hypothesis import given, strategies as st

from biconseq import (
    Language,
    LanguageSpec,
    ParseError,
    PreconditionError,
    Sentence,
    complement,
    enumerate_language,
    format_sentence,
    parse_sentence,
)

IMP = LanguageSpec.generated(["p", "q", "r"], [("->", 2)], 2)
ALL = LanguageSpec.generated(["p", "q"], [("->", 2), ("|", 2), ("&", 2), ("~", 1)], 2)

p, q, r = (Sentence.atom(x) for x in "pqr")


def imp(a, b):
    return Sentence.compound("->", [a, b])


def test_implication_is_right_associative():
    assert parse_sentence("p -> q -> r", IMP) == imp(p, imp(q, r))


def test_atom():
    assert parse_sentence("p", IMP) == p


def test_parenthesised_antecedent():
    assert parse_sentence("(p -> q) -> p", IMP) == imp(imp(p, q), p)


def test_precedence_of_binary_connectives():
    s = parse_sentence("p | q & ~p -> q", ALL)
    assert s.connective == "->"
    left = s.args[0]
    assert left.connective == "|" and left.args[1].connective == "&"
    assert left.args[1].args[1] == Sentence.compound("~", [p])


def test_disjunction_is_left_associative():
    s = parse_sentence("p | q | p", ALL)
    assert s.args[0] == Sentence.compound("|", [p, q])


@pytest.mark.parametrize("text, fragment", [
    ("p ->", "end of input"),
    ("p q", "unexpected token"),
    ("(p -> q", "end of input"),
    ("p -> s", "unknown atom"),
    ("p | q", "not declared"),
    ("~p", "not declared"),
    ("p $ q", "unexpected character"),
    ("", "empty"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_sentence(text, IMP)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_sentence("p -> s", IMP)
    assert exc.value.position == 5


def test_compound_arity_checked():
    with pytest.raises(ParseError, match="arity"):
        Sentence.compound("->", [p])


def test_parse_requires_generated_spec():
    with pytest.raises(PreconditionError):
        parse_sentence("p", LanguageSpec.explicit(["p"]))


def test_six_sentence_language():
    lang = enumerate_language(LanguageSpec.generated(["p", "q"], [("->", 2)], 1))
    assert [str(s) for s in lang] == ["p", "q", "p -> p", "p -> q", "q -> p", "q -> q"]


def test_explicit_language_keeps_declared_order():
    lang = enumerate_language(LanguageSpec.explicit(["H", "0", "1", "2"]))
    assert lang.names(lang.full) == ["H", "0", "1", "2"]


def test_depth_zero_without_connectives():
    lang = enumerate_language(LanguageSpec.generated(["p"], [], 0))
    assert [str(s) for s in lang] == ["p"]


def test_language_sizes():
    # depth-2 implication over two atoms: 2 + 4 + (6^2 - 2^2)
    assert enumerate_language(LanguageSpec.generated(["p", "q"], [("->", 2)], 2)).n == 38
    assert enumerate_language(LanguageSpec.generated(["p", "q", "r"], [("->", 2)], 2)).n == 3 + 9 + 135


def test_generated_language_is_subformula_closed():
    lang = enumerate_language(ALL)
    for s in lang:
        for a in s.args:
            assert a in lang.index


def test_generation_is_deterministic():
    a = enumerate_language(ALL)
    b = enumerate_language(LanguageSpec.generated(["p", "q"], [("->", 2), ("|", 2), ("&", 2), ("~", 1)], 2))
    assert a.sentences == b.sentences


@pytest.mark.parametrize("spec", [
    LanguageSpec.generated(["p", "q"], [("->", 2)], 3),
    LanguageSpec.generated(["p"], [("~", 1), ("->", 2), ("|", 2), ("&", 2)], 3),
])
def test_format_parse_round_trip_exhaustive(spec):
    for s in enumerate_language(spec):
        assert parse_sentence(format_sentence(s), spec) == s


@pytest.mark.parametrize("bad", [
    lambda: LanguageSpec.explicit([]),
    lambda: LanguageSpec.explicit(["a", "a"]),
    lambda: LanguageSpec.generated(["p", "p"]),
    lambda: LanguageSpec.generated(["1p"]),
    lambda: LanguageSpec.generated(["p"], [("->", 1)]),
    lambda: LanguageSpec.generated(["p"], [("%", 2)]),
    lambda: LanguageSpec.generated(["p"], [], -1),
])
def test_invalid_specs(bad):
    with pytest.raises(PreconditionError):
        bad()


def test_language_file_round_trip():
    for spec in (ALL, LanguageSpec.explicit(["0", "1", "H"])):
        assert LanguageSpec.from_text(spec.to_text()) == spec


def test_language_file_exact_tokens():
    spec = LanguageSpec.from_text("@generated atoms=p,q connectives=->:2,|:2 depth=2\n")
    assert spec.atoms == ("p", "q") and spec.connectives == (("->", 2), ("|", 2)) and spec.depth == 2
    with pytest.raises(ParseError):
        LanguageSpec.from_text("@generated atoms=p colour=red")
    with pytest.raises(ParseError):
        LanguageSpec.from_text("@mystery")


def test_lookup_respects_depth_bound():
    lang = enumerate_language(LanguageSpec.generated(["p"], [("->", 2)], 1))
    with pytest.raises(ParseError, match="depth"):
        lang.lookup("p -> p -> p")


L2 = enumerate_language(LanguageSpec.explicit(["p", "q"]))


def test_complement_examples():
    assert complement(0, L2) == L2.mask(["p", "q"])
    assert complement(L2.bit("p"), L2) == L2.bit("q")
    assert complement(L2.full, L2) == 0


masks = st.integers(0, (1 << 5) - 1)
L5 = enumerate_language(LanguageSpec.explicit(list("abcde")))


@given(masks, masks)
def test_complement_laws(a, b):
    assert complement(complement(a, L5), L5) == a
    assert complement(a, L5) | a == L5.full and complement(a, L5) & a == 0
    assert complement(a | b, L5) == complement(a, L5) & complement(b, L5)
    assert complement(a & b, L5) == complement(a, L5) | complement(b, L5)
