"""Whole-word, case-insensitive matching of lexicon terms in corpus text.

Words are located by Unicode word segmentation: a word is a maximal run of
characters from the Letter, Mark, Number and connector-punctuation categories.
This keeps Devanagari matras and other combining marks inside their word and
makes no ASCII assumptions, unlike regex ``\\b``. Matching is whole-word only
("hora" never matches inside "horas") and diacritic-sensitive; the only
normalizations applied are NFC and full Unicode case folding.

Multi-word surfaces match as contiguous word sequences: the words of the
surface must appear consecutively in the text's word stream, whatever
whitespace or punctuation separates them.

All functions here are pure; callers may parallelize across documents and
must get identical results regardless of parallelism.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from typing import Iterable

from .corpus import Example
from .lexicon import Lexicon, LexiconTerm

# Unicode general-category initials treated as word characters. Pc (e.g. "_")
# joins words so that handles like "Hartes_Geld" stay one word.
_WORD_CATEGORIES = ("L", "M", "N")


def _is_word_char(ch: str) -> bool:
    cat = unicodedata.category(ch)
    return cat[0] in _WORD_CATEGORIES or cat == "Pc"


@dataclass(frozen=True)
class WordToken:
    """A word occurrence: half-open span in Unicode scalar offsets."""

    start: int
    end: int
    text: str


def word_tokens(text: str) -> list[WordToken]:
    """Segment ``text`` into word tokens (maximal word-character runs)."""
    tokens: list[WordToken] = []
    start: int | None = None
    for i, ch in enumerate(text):
        if _is_word_char(ch):
            if start is None:
                start = i
        elif start is not None:
            tokens.append(WordToken(start, i, text[start:i]))
            start = None
    if start is not None:
        tokens.append(WordToken(start, len(text), text[start:]))
    return tokens


def fold_token(token: str) -> str:
    """Comparison form of a word token: NFC then full case folding."""
    return unicodedata.normalize("NFC", token).casefold()


def term_token_key(term: LexiconTerm) -> tuple[str, ...]:
    """The folded word sequence of a term surface (empty for punctuation-only
    surfaces, which can never match)."""
    return tuple(fold_token(t.text) for t in word_tokens(term.surface))


@dataclass(frozen=True)
class TermMatch:
    """One lexicon term occurrence in a document.

    ``char_span`` covers the first through last matched word; the folded word
    sequence of ``matched_text`` equals the term surface's folded words.
    """

    term: LexiconTerm
    char_span: tuple[int, int]
    matched_text: str

    @property
    def start(self) -> int:
        return self.char_span[0]

    @property
    def end(self) -> int:
        return self.char_span[1]


@dataclass(frozen=True)
class MatchReport:
    """Per-document matches plus the type flags the sampler keys on."""

    example_id: str
    matches: tuple[TermMatch, ...]
    has_slur: bool
    has_target: bool
    has_neutral: bool


class _TermIndex:
    """First-word index over a lexicon for the scan in :func:`find_terms`."""

    def __init__(self, lexicon: Lexicon, languages: Iterable[str] | None):
        langs = set(languages) if languages is not None else None
        self.by_first_word: dict[str, list[tuple[tuple[str, ...], LexiconTerm]]] = {}
        self.max_words = 0
        for term in lexicon.terms:
            if langs is not None and term.language not in langs:
                continue
            key = term_token_key(term)
            if not key:
                continue
            self.by_first_word.setdefault(key[0], []).append((key, term))
            self.max_words = max(self.max_words, len(key))


def find_terms(
    text: str,
    lexicon: Lexicon,
    language_filter: Iterable[str] | None = None,
) -> list[TermMatch]:
    """All whole-word, case-folded occurrences of lexicon surfaces in ``text``.

    ``language_filter`` restricts which lexicon entries participate; ``None``
    matches against every entry. Overlapping matches of distinct terms are all
    reported. Output is deterministically ordered by (start, surface, country,
    language).
    """
    if not text:
        return []
    index = _TermIndex(lexicon, language_filter)
    if not index.by_first_word:
        return []
    tokens = word_tokens(text)
    folded = [fold_token(t.text) for t in tokens]
    matches: list[TermMatch] = []
    for i, first in enumerate(folded):
        for key, term in index.by_first_word.get(first, ()):
            n = len(key)
            if i + n > len(tokens):
                continue
            if tuple(folded[i : i + n]) == key:
                start = tokens[i].start
                end = tokens[i + n - 1].end
                matches.append(TermMatch(term, (start, end), text[start:end]))
    matches.sort(
        key=lambda m: (m.start, m.term.surface, m.term.country, m.term.language)
    )
    return matches


def classify_example(
    example: Example,
    lexicon: Lexicon,
    language_filter: Iterable[str] | None = None,
) -> MatchReport:
    """Match one corpus example and derive its type flags.

    A multi-type term sets every flag its types imply.
    """
    matches = tuple(find_terms(example.text, lexicon, language_filter))
    return MatchReport(
        example_id=example.id,
        matches=matches,
        has_slur=any(m.term.is_slur for m in matches),
        has_target=any(m.term.is_target for m in matches),
        has_neutral=any(m.term.is_neutral for m in matches),
    )


def match_report_json(report: MatchReport) -> str:
    """One JSON Lines record for a match report."""
    payload = {
        "id": report.example_id,
        "matches": [
            {
                "term": m.term.surface,
                "types": list(m.term.type_labels()),
                "start": m.start,
                "end": m.end,
            }
            for m in report.matches
        ],
        "has_slur": report.has_slur,
        "has_target": report.has_target,
    }
    return json.dumps(payload, ensure_ascii=False, sort_keys=False)
