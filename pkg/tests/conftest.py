import pytest
from hypothesis import settings, strategies as st

from biconseq import LanguageSpec, Semantics, enumerate_language
from biconseq.cases import boolean_semantics

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

NAMES = ("a", "b", "c", "d")


def explicit(*names):
    return enumerate_language(LanguageSpec.explicit(names))


def lang_n(n):
    return explicit(*NAMES[:n])


@st.composite
def semantics(draw, min_n=1, max_n=3):
    n = draw(st.integers(min_n, max_n))
    lang = lang_n(n)
    vals = draw(st.sets(st.integers(0, (1 << n) - 1)))
    return Semantics(lang, vals)


@pytest.fixture
def imp1():
    """Implication fragment over p, q at depth 1 with its Boolean semantics."""
    lang = enumerate_language(LanguageSpec.generated(["p", "q"], [("->", 2)], 1))
    return lang, boolean_semantics(lang)


@pytest.fixture
def toy():
    """Implication fragment over p alone: L = {p, p -> p}."""
    lang = enumerate_language(LanguageSpec.generated(["p"], [("->", 2)], 1))
    return lang, boolean_semantics(lang)
