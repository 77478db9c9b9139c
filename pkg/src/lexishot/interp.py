"""Interpretability analytics: lexicon annotation of keyword lists and
representation-shift analysis between two embedding tables.

``annotate_words`` resolves an ordered word list (e.g. the top words a
saliency tool attributes to a classifier) against one country's lexicon
subset, so that deciding which of those words are slurs or target group
names no longer needs a human pass.

``shift_report`` compares a term's vector in a "before" table against the
same term in an "after" table (typically the same encoder layer extracted
before and after finetuning) and aggregates per-term cosine similarities
into group means. The producer is responsible for sub-token aggregation;
``word_vector`` is exposed for producers that emit token-level vectors.

Embedding table file format: UTF-8 text, first line ``DIM <d>``, then
optional ``META <key> <value>`` lines, then one ``key<TAB>f1 f2 ... fd``
entry per line with decimal floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Sequence

from .lexicon import Lexicon, TermType
from .rng import sample_sorted, stream


@dataclass(frozen=True)
class AnnotatedWord:
    """A word and the union of type labels of its lexicon hits (None when
    the word is not in the lexicon)."""

    word: str
    types: frozenset[TermType] | None

    @property
    def matched(self) -> bool:
        return self.types is not None


@dataclass(frozen=True)
class WordListSummary:
    """Counts over an annotated word list; a Target/Slur word increments both
    the slur and the target count (and ``both``)."""

    slurs: int
    targets: int
    both: int
    unmatched: int


@dataclass(frozen=True)
class AnnotatedWordList:
    country: str
    entries: tuple[AnnotatedWord, ...]
    summary: WordListSummary


def summarize_entries(entries: Sequence[AnnotatedWord]) -> WordListSummary:
    """Recompute summary counts from entries (the summary is purely derived)."""
    slurs = targets = both = unmatched = 0
    for entry in entries:
        if entry.types is None:
            unmatched += 1
            continue
        is_slur = TermType.SLUR in entry.types
        is_target = TermType.TARGET in entry.types
        slurs += is_slur
        targets += is_target
        both += is_slur and is_target
    return WordListSummary(slurs, targets, both, unmatched)


def annotate_words(
    words: Sequence[str], lexicon: Lexicon, country: str
) -> AnnotatedWordList:
    """Annotate each word with the types of its case-folded lexicon hits in
    ``country`` (across all of that country's languages)."""
    entries = []
    for word in words:
        hits = lexicon.lookup(word, country=country)
        types: frozenset[TermType] | None = None
        if hits:
            types = frozenset().union(*(t.types for t in hits))
        entries.append(AnnotatedWord(word, types))
    return AnnotatedWordList(country, tuple(entries), summarize_entries(entries))


def annotation_json(annotated: AnnotatedWordList) -> str:
    payload = {
        "country": annotated.country,
        "entries": [
            {
                "word": e.word,
                "types": sorted(t.value for t in e.types) if e.types is not None else None,
            }
            for e in annotated.entries
        ],
        "summary": {
            "slurs": annotated.summary.slurs,
            "targets": annotated.summary.targets,
            "both": annotated.summary.both,
            "unmatched": annotated.summary.unmatched,
        },
    }
    return json.dumps(payload, ensure_ascii=False, indent=2)


def summary_phrase(summary: WordListSummary) -> str:
    """Human line like ``1 slur, 4 targets``."""

    def plural(n: int, noun: str) -> str:
        return f"{n} {noun}{'' if n == 1 else 's'}"

    return f"{plural(summary.slurs, 'slur')}, {plural(summary.targets, 'target')}"


class EmbeddingFormatError(ValueError):
    """Raised for malformed embedding table files (1-based line number)."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class EmbeddingTable:
    """Keyed real vectors with a fixed dimension; no NaN/Inf components."""

    dimension: int
    entries: Mapping[str, tuple[float, ...]]
    metadata: Mapping[str, str]

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        for key, vec in self.entries.items():
            if len(vec) != self.dimension:
                raise ValueError(
                    f"vector for {key!r} has length {len(vec)}, expected {self.dimension}"
                )
            if not all(math.isfinite(x) for x in vec):
                raise ValueError(f"vector for {key!r} has non-finite components")

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def load_embedding_table(source: str) -> EmbeddingTable:
    """Parse and validate the embedding table text format."""
    lines = source.splitlines()
    if not lines or not lines[0].startswith("DIM "):
        raise EmbeddingFormatError(1, "first line must be 'DIM <d>'")
    try:
        dimension = int(lines[0][4:].strip())
    except ValueError:
        raise EmbeddingFormatError(1, f"bad dimension {lines[0][4:].strip()!r}") from None
    if dimension < 1:
        raise EmbeddingFormatError(1, f"dimension must be >= 1, got {dimension}")
    metadata: dict[str, str] = {}
    entries: dict[str, tuple[float, ...]] = {}
    in_entries = False
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        if raw.startswith("META "):
            if in_entries:
                raise EmbeddingFormatError(lineno, "META line after entries")
            parts = raw.split(" ", 2)
            if len(parts) != 3:
                raise EmbeddingFormatError(lineno, "META needs a key and a value")
            metadata[parts[1]] = parts[2]
            continue
        in_entries = True
        if "\t" not in raw:
            raise EmbeddingFormatError(lineno, "entry needs 'key<TAB>components'")
        key, _, rest = raw.partition("\t")
        if not key:
            raise EmbeddingFormatError(lineno, "empty entry key")
        if key in entries:
            raise EmbeddingFormatError(lineno, f"duplicate key {key!r}")
        comps = rest.split()
        if len(comps) != dimension:
            raise EmbeddingFormatError(
                lineno, f"{key!r} has {len(comps)} components, expected {dimension}"
            )
        try:
            vec = tuple(float(c) for c in comps)
        except ValueError:
            raise EmbeddingFormatError(lineno, f"non-numeric component in {key!r}") from None
        if not all(math.isfinite(x) for x in vec):
            raise EmbeddingFormatError(lineno, f"non-finite component in {key!r}")
        entries[key] = vec
    return EmbeddingTable(dimension, entries, metadata)


def dump_embedding_table(table: EmbeddingTable) -> str:
    """Serialize a table; floats use ``repr`` so values round-trip exactly."""
    lines = [f"DIM {table.dimension}"]
    for key in sorted(table.metadata):
        lines.append(f"META {key} {table.metadata[key]}")
    for key in sorted(table.entries):
        lines.append(key + "\t" + " ".join(repr(x) for x in table.entries[key]))
    return "\n".join(lines) + "\n"


def word_vector(
    token_vectors: Sequence[Sequence[float]], word: str | None = None
) -> tuple[float, ...]:
    """Component-wise arithmetic mean of a word's token vectors.

    ``word`` is only used in error messages.
    """
    ctx = f" for {word!r}" if word else ""
    if not token_vectors:
        raise ValueError(f"no token vectors{ctx}")
    dim = len(token_vectors[0])
    for vec in token_vectors:
        if len(vec) != dim:
            raise ValueError(
                f"token vector dimension mismatch{ctx}: {len(vec)} != {dim}"
            )
    n = len(token_vectors)
    return tuple(math.fsum(vec[i] for vec in token_vectors) / n for i in range(dim))


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine similarity dot(u,v) / (|u| |v|); undefined (error) for zero
    vectors."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} != {len(v)}")
    if not u:
        raise ValueError("empty vectors")
    dot = math.fsum(a * b for a, b in zip(u, v))
    nu = math.sqrt(math.fsum(a * a for a in u))
    nv = math.sqrt(math.fsum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for zero vectors")
    return dot / (nu * nv)


SHIFT_METRICS = ("cosine", "distance")


@dataclass(frozen=True)
class GroupShift:
    """Per-group result: member term values and their arithmetic mean."""

    name: str
    mean: float
    terms: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class ShiftReport:
    metric: str
    groups: tuple[GroupShift, ...]


def shift_report(
    before: EmbeddingTable,
    after: EmbeddingTable,
    groups: Mapping[str, Sequence[str]],
    metric: str = "cosine",
) -> ShiftReport:
    """Per-term similarity between paired tables, aggregated per group.

    ``metric`` is ``cosine`` or ``distance`` (1 - cosine). Groups must be
    disjoint and every grouped term must be present in both tables.
    """
    if metric not in SHIFT_METRICS:
        raise ValueError(f"unknown metric {metric!r} (expected one of {SHIFT_METRICS})")
    seen: dict[str, str] = {}
    for name, terms in groups.items():
        for term in terms:
            if term in seen and seen[term] != name:
                raise ValueError(
                    f"term {term!r} appears in groups {seen[term]!r} and {name!r}; "
                    "groups must be disjoint"
                )
            seen[term] = name
    missing = sorted(
        term
        for terms in groups.values()
        for term in terms
        if term not in before or term not in after
    )
    if missing:
        raise ValueError(f"terms missing from a table: {', '.join(missing)}")
    out = []
    for name in sorted(groups):
        values = []
        for term in sorted(set(groups[name])):
            sim = cosine(before.entries[term], after.entries[term])
            values.append((term, 1.0 - sim if metric == "distance" else sim))
        if not values:
            raise ValueError(f"group {name!r} is empty")
        mean = math.fsum(v for _, v in values) / len(values)
        out.append(GroupShift(name, mean, tuple(values)))
    return ShiftReport(metric, tuple(out))


def shift_report_json(report: ShiftReport) -> str:
    payload = {
        "metric": report.metric,
        "groups": [
            {
                "name": g.name,
                "mean": g.mean,
                "terms": [{"term": t, "value": v} for t, v in g.terms],
            }
            for g in report.groups
        ],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2)


def render_shift_table(report: ShiftReport) -> str:
    """Aligned text table of group means."""
    rows = [("Group", "Mean")]
    rows += [(g.name, f"{g.mean:.4f}") for g in report.groups]
    widths = [max(len(r[i]) for r in rows) for i in range(2)]
    return "\n".join(
        "  ".join((r[0].ljust(widths[0]), r[1].rjust(widths[1]))).rstrip() for r in rows
    )


def sample_random_words(candidates: Sequence[str], k: int, seed: int) -> list[str]:
    """Seeded uniform draw of ``k`` distinct words, e.g. to build a random
    baseline group matching a term group in size. Same generator family as
    the shot sampler; independent of candidate ordering."""
    if k > len(set(candidates)):
        raise ValueError(f"cannot draw {k} distinct words from {len(set(candidates))}")
    return sample_sorted(sorted(set(candidates)), k, stream(seed, "random-words"))


def load_stopwords(language: str) -> tuple[str, ...]:
    """Bundled per-language stopword list (replaceable input, not canonical).

    Languages ship as ``data/stopwords/<language>.txt`` resources.
    """
    ref = resources.files("lexishot").joinpath(f"data/stopwords/{language}.txt")
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"no bundled stopword list for language {language!r}") from None
    return tuple(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )
