"""Reading and writing the text file formats."""

from __future__ import annotations

from pathlib import Path

from biconseq.consequence import Consecution, parse_consecutions, parse_schemas
from biconseq.errors import ParseError, PreconditionError
from biconseq.semantics import Semantics
from biconseq.sentences import Language, LanguageSpec, enumerate_language


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise PreconditionError(f"no such file: {path}") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc.reason})") from None


def load_language(path) -> Language:
    return enumerate_language(LanguageSpec.from_text(_read(path)))


def load_semantics(path, lang: Language | None = None) -> Semantics:
    """Semantics file; its ``@lang`` reference resolves relative to the file."""
    text = _read(path)
    if lang is None:
        ref = Path(Semantics.header_ref(text))
        if not ref.is_absolute():
            ref = Path(path).parent / ref
        lang = load_language(ref)
    return Semantics.from_text(text, lang)


def load_consecutions(path, lang: Language) -> list[Consecution]:
    return parse_consecutions(_read(path), lang)


def load_schemas(path, lang: Language):
    return parse_schemas(_read(path), lang)


def write_language(path, lang: Language) -> None:
    Path(path).write_text(lang.spec.to_text(), encoding="utf-8")


def write_semantics(path, V: Semantics, lang_ref: str) -> None:
    Path(path).write_text(V.to_text(lang_ref), encoding="utf-8")
