"""Corpus items and the corpus TSV format.

A corpus row is ``id <TAB> label <TAB> language <TAB> text`` with label in
{HOF, NOT} (hateful / neutral) unless a different label set is declared.
Text is the last column, so tabs inside the text survive a round trip only
when re-escaped by the producer; we split on at most three tabs to be
forgiving about raw tweets.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Sequence

DEFAULT_LABELS = ("HOF", "NOT")


class CorpusFormatError(ValueError):
    """Raised for malformed corpus rows; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Example:
    """A corpus item: identifier, binary label, language and raw text."""

    id: str
    label: str
    language: str
    text: str


def load_corpus(source: str, labels: Sequence[str] = DEFAULT_LABELS) -> list[Example]:
    """Parse corpus TSV content into a list of examples.

    Validates labels against ``labels`` and rejects duplicate ids, reporting
    the offending line number.
    """
    label_set = set(labels)
    examples: list[Example] = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = raw.split("\t", 3)
        if len(cols) != 4:
            raise CorpusFormatError(
                lineno, f"expected 4 tab-separated columns, got {len(cols)}"
            )
        ex_id, label, language, text = (c.strip() for c in cols)
        if not ex_id:
            raise CorpusFormatError(lineno, "empty example id")
        if label not in label_set:
            raise CorpusFormatError(
                lineno, f"unknown label {label!r} (expected one of {sorted(label_set)})"
            )
        if ex_id in seen:
            raise CorpusFormatError(
                lineno, f"duplicate example id {ex_id!r}; first seen on line {seen[ex_id]}"
            )
        seen[ex_id] = lineno
        examples.append(
            Example(ex_id, label, language, unicodedata.normalize("NFC", text))
        )
    return examples


def dump_corpus(examples: Iterable[Example]) -> str:
    lines = [f"{e.id}\t{e.label}\t{e.language}\t{e.text}" for e in examples]
    return "\n".join(lines) + ("\n" if lines else "")
