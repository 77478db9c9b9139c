"""Data model, parsing, validation and statistics for the multilingual term lexicon.

The lexicon is a flat list of terms, each carrying a surface form, the country
it was collected for, the language it is written in, one to three type labels
(Neutral, Target, Slur) and a free-form description. Terms that are both a
group denotation and a slur (e.g. a community's self-designation that is also
used against it) are stored as a single multi-type entry, never duplicated
into separate rows.

File format (see ``load_lexicon``): UTF-8 TSV, one term per line, columns

    surface <TAB> country <TAB> language <TAB> types <TAB> description

where ``types`` is a ``|``-joined subset of {Neutral, Target, Slur}. Lines
starting with ``#`` are comments; blank lines are ignored. There is no header
row.

Surfaces are NFC-normalized on load (combining characters and Devanagari
otherwise break equality) and stored as given by the annotator; the lookup
index is case-folded so that matching is case-insensitive while display
preserves the original form.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping


class TermType(Enum):
    """Type label of a lexicon term."""

    NEUTRAL = "Neutral"
    TARGET = "Target"
    SLUR = "Slur"


# Canonical label order used for serialization and reports.
_TYPE_ORDER = (TermType.NEUTRAL, TermType.TARGET, TermType.SLUR)
_LABEL_TO_TYPE = {t.value: t for t in TermType}


class LexiconFormatError(ValueError):
    """Raised when a lexicon file is malformed.

    ``line`` is the 1-based line number of the offending row.
    """

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


@dataclass(frozen=True)
class LexiconTerm:
    """A single lexicon entry.

    Invariants: ``surface`` is non-empty, NFC-normalized and has no
    surrounding whitespace; ``types`` is a non-empty set of at most three
    labels.
    """

    surface: str
    country: str
    language: str
    types: frozenset[TermType]
    description: str = ""

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("term surface must be non-empty")
        if self.surface != self.surface.strip():
            raise ValueError(f"term surface {self.surface!r} has surrounding whitespace")
        if self.surface != _nfc(self.surface):
            raise ValueError(f"term surface {self.surface!r} is not NFC-normalized")
        if not self.types:
            raise ValueError(f"term {self.surface!r} has an empty type set")
        if not self.country:
            raise ValueError(f"term {self.surface!r} has an empty country")
        if not self.language:
            raise ValueError(f"term {self.surface!r} has an empty language")

    @property
    def key(self) -> tuple[str, str, str]:
        """Uniqueness key: (case-folded surface, country, language)."""
        return (self.surface.casefold(), self.country, self.language)

    @property
    def is_slur(self) -> bool:
        return TermType.SLUR in self.types

    @property
    def is_target(self) -> bool:
        return TermType.TARGET in self.types

    @property
    def is_neutral(self) -> bool:
        return TermType.NEUTRAL in self.types

    def type_labels(self) -> tuple[str, ...]:
        """Type labels in canonical Neutral, Target, Slur order."""
        return tuple(t.value for t in _TYPE_ORDER if t in self.types)


@dataclass(frozen=True)
class Lexicon:
    """An immutable, validated collection of terms with a case-folded index.

    Safe for unrestricted concurrent reads once constructed. No two terms
    share (case-folded surface, country, language).
    """

    terms: tuple[LexiconTerm, ...]
    _index: dict[str, tuple[LexiconTerm, ...]] = field(repr=False, compare=False, default_factory=dict)

    @staticmethod
    def from_terms(terms: Iterable[LexiconTerm]) -> Lexicon:
        terms = tuple(terms)
        seen: dict[tuple[str, str, str], LexiconTerm] = {}
        for term in terms:
            if term.key in seen:
                raise ValueError(
                    f"duplicate term {term.surface!r} for ({term.country}, {term.language})"
                )
            seen[term.key] = term
        index: dict[str, list[LexiconTerm]] = {}
        for term in terms:
            index.setdefault(term.surface.casefold(), []).append(term)
        return Lexicon(terms, {k: tuple(v) for k, v in index.items()})

    def __len__(self) -> int:
        return len(self.terms)

    def lookup(
        self,
        surface: str,
        country: str | None = None,
        languages: Iterable[str] | None = None,
    ) -> tuple[LexiconTerm, ...]:
        """All terms whose case-folded surface equals ``surface`` case-folded,
        optionally restricted by country and/or language set."""
        hits = self._index.get(_nfc(surface).casefold(), ())
        if country is not None:
            hits = tuple(t for t in hits if t.country == country)
        if languages is not None:
            langs = set(languages)
            hits = tuple(t for t in hits if t.language in langs)
        return hits

    def subset(
        self,
        countries: Iterable[str] | None = None,
        languages: Iterable[str] | None = None,
    ) -> Lexicon:
        """A new Lexicon restricted to the given countries and/or languages."""
        cs = set(countries) if countries is not None else None
        ls = set(languages) if languages is not None else None
        kept = [
            t
            for t in self.terms
            if (cs is None or t.country in cs) and (ls is None or t.language in ls)
        ]
        return Lexicon.from_terms(kept)

    def countries(self) -> tuple[str, ...]:
        return tuple(sorted({t.country for t in self.terms}))

    def languages(self) -> tuple[str, ...]:
        return tuple(sorted({t.language for t in self.terms}))


def load_lexicon(source: str, allowed_countries: Iterable[str] | None = None) -> Lexicon:
    """Parse lexicon TSV content into a validated :class:`Lexicon`.

    ``source`` is the file content (UTF-8 text, already decoded). When
    ``allowed_countries`` is given, rows naming any other country are
    rejected; by default any non-empty country identifier is accepted.

    Raises :class:`LexiconFormatError` with the 1-based line number for:
    wrong column count, unknown type label, empty type set, and duplicate
    (surface, country, language).
    """
    allowed = set(allowed_countries) if allowed_countries is not None else None
    terms: list[LexiconTerm] = []
    first_line: dict[tuple[str, str, str], int] = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = raw.split("\t")
        if len(cols) != 5:
            raise LexiconFormatError(
                lineno, f"expected 5 tab-separated columns, got {len(cols)}"
            )
        surface_raw, country, language, type_cell, description = cols
        surface = _nfc(surface_raw.strip())
        country = _nfc(country.strip())
        language = _nfc(language.strip())
        description = _nfc(description.strip())
        if not surface:
            raise LexiconFormatError(lineno, "empty term surface")
        if not country:
            raise LexiconFormatError(lineno, "empty country")
        if allowed is not None and country not in allowed:
            raise LexiconFormatError(
                lineno, f"unknown country {country!r} (allowed: {sorted(allowed)})"
            )
        if not language:
            raise LexiconFormatError(lineno, "empty language")
        labels = [part.strip() for part in type_cell.split("|") if part.strip()]
        if not labels:
            raise LexiconFormatError(lineno, "empty type set")
        types = set()
        for label in labels:
            if label not in _LABEL_TO_TYPE:
                raise LexiconFormatError(
                    lineno,
                    f"unknown type label {label!r} (expected Neutral, Target or Slur)",
                )
            types.add(_LABEL_TO_TYPE[label])
        term = LexiconTerm(surface, country, language, frozenset(types), description)
        if term.key in first_line:
            raise LexiconFormatError(
                lineno,
                f"duplicate term {surface!r} for ({country}, {language}); "
                f"first defined on line {first_line[term.key]}",
            )
        first_line[term.key] = lineno
        terms.append(term)
    return Lexicon.from_terms(terms)


def dump_lexicon(lexicon: Lexicon) -> str:
    """Serialize a Lexicon back to the TSV format.

    Reloading the output yields a Lexicon with the same term multiset
    (round-trip property).
    """
    lines = []
    for term in lexicon.terms:
        lines.append(
            "\t".join(
                (
                    term.surface,
                    term.country,
                    term.language,
                    "|".join(term.type_labels()),
                    term.description,
                )
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


# The six combinations observed in practice, in report order. Anything else
# (e.g. a triple-typed term) falls into the "Other" bucket.
STAT_BUCKETS = (
    "Neutral",
    "Target",
    "Slur",
    "Neutral/Target",
    "Neutral/Slur",
    "Target/Slur",
    "Other",
)

_COMBO_TO_BUCKET = {
    frozenset({TermType.NEUTRAL}): "Neutral",
    frozenset({TermType.TARGET}): "Target",
    frozenset({TermType.SLUR}): "Slur",
    frozenset({TermType.NEUTRAL, TermType.TARGET}): "Neutral/Target",
    frozenset({TermType.NEUTRAL, TermType.SLUR}): "Neutral/Slur",
    frozenset({TermType.TARGET, TermType.SLUR}): "Target/Slur",
}


def bucket_of(types: frozenset[TermType]) -> str:
    """The single stats bucket a type combination belongs to."""
    return _COMBO_TO_BUCKET.get(types, "Other")


@dataclass(frozen=True)
class CountryStats:
    """Per-country counts, one bucket per observed type combination."""

    counts: Mapping[str, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def as_row(self) -> tuple[int, ...]:
        """Counts in ``STAT_BUCKETS`` order."""
        return tuple(self.counts.get(b, 0) for b in STAT_BUCKETS)


@dataclass(frozen=True)
class LexiconStats:
    """Statistics per country; every term counts in exactly one bucket."""

    by_country: Mapping[str, CountryStats]

    def total(self, country: str) -> int:
        stats = self.by_country.get(country)
        return stats.total if stats is not None else 0

    def grand_total(self) -> int:
        return sum(s.total for s in self.by_country.values())


@dataclass(frozen=True)
class TotalDiscrepancy:
    """A country whose computed term total differs from a declared total."""

    country: str
    computed: int
    declared: int


def compute_stats(lexicon: Lexicon) -> LexiconStats:
    """Count terms per country and per type combination.

    Totals are always computed from the data, never read from the input.
    """
    by_country: dict[str, dict[str, int]] = {}
    for term in lexicon.terms:
        counts = by_country.setdefault(term.country, {b: 0 for b in STAT_BUCKETS})
        counts[bucket_of(term.types)] += 1
    return LexiconStats(
        {country: CountryStats(dict(counts)) for country, counts in sorted(by_country.items())}
    )


def validate_against_declared(
    stats: LexiconStats, declared_totals: Mapping[str, int]
) -> list[TotalDiscrepancy]:
    """Compare computed per-country totals against declared ones.

    Returns one record per declared country whose computed total differs,
    sorted by country name. Countries absent from the lexicon count as 0.
    """
    out = []
    for country in sorted(declared_totals):
        computed = stats.total(country)
        declared = declared_totals[country]
        if computed != declared:
            out.append(TotalDiscrepancy(country, computed, declared))
    return out


def render_stats_table(stats: LexiconStats) -> str:
    """Aligned text table of stats: one column per country, one row per bucket."""
    countries = sorted(stats.by_country)
    header = ["Type"] + countries
    rows = [header]
    for bucket in STAT_BUCKETS:
        row = [bucket] + [str(stats.by_country[c].counts.get(bucket, 0)) for c in countries]
        rows.append(row)
    rows.append(["Total"] + [str(stats.total(c)) for c in countries])
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)
