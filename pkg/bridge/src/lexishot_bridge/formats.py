"""Readers and writers for the toolkit's file interfaces.

The bridge talks to the analysis toolkit purely through files: term lists
(lexicon TSV or plain word lists), shot set JSONL, corpus TSV, predictions
TSV and the embedding table text format. The formats are re-implemented here
so the bridge carries no dependency on the toolkit package itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


def read_terms(text: str) -> list[str]:
    """Term surfaces from a lexicon TSV (first column) or a plain word list.

    Duplicates are dropped, first occurrence wins; ``#`` comment lines and
    blanks are skipped.
    """
    terms: list[str] = []
    seen: set[str] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        surface = raw.split("\t", 1)[0].strip() if "\t" in raw else line
        if surface and surface not in seen:
            seen.add(surface)
            terms.append(surface)
    return terms


@dataclass(frozen=True)
class Shot:
    id: str
    label: str
    text: str


def read_shot_set(text: str) -> tuple[dict, list[Shot]]:
    """Parse shot set JSONL: the header object and the example rows."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty shot set file")
    header = json.loads(lines[0])
    if not isinstance(header, dict) or "method" not in header:
        raise ValueError("first line must be the shot set header object")
    shots = []
    for lineno, line in enumerate(lines[1:], start=2):
        rec = json.loads(line)
        try:
            shots.append(Shot(str(rec["id"]), str(rec["label"]), str(rec["text"])))
        except KeyError as exc:
            raise ValueError(f"line {lineno}: missing field {exc}") from None
    return header, shots


@dataclass(frozen=True)
class CorpusRow:
    id: str
    label: str
    language: str
    text: str


def read_corpus(text: str) -> list[CorpusRow]:
    """Parse corpus TSV: ``id<TAB>label<TAB>language<TAB>text``."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = raw.split("\t", 3)
        if len(cols) != 4:
            raise ValueError(f"line {lineno}: expected 4 columns, got {len(cols)}")
        rows.append(CorpusRow(*(c.strip() for c in cols)))
    return rows


def write_predictions(rows: list[tuple[str, str, str]]) -> str:
    """Predictions TSV: ``id<TAB>gold<TAB>pred``."""
    return "".join(f"{i}\t{g}\t{p}\n" for i, g, p in rows)


def write_embedding_table(
    dimension: int, entries: dict[str, list[float]], metadata: dict[str, str]
) -> str:
    """The toolkit's embedding table format: DIM line, META lines, then one
    sorted ``key<TAB>components`` entry per line (repr floats round-trip)."""
    lines = [f"DIM {dimension}"]
    for key in sorted(metadata):
        lines.append(f"META {key} {metadata[key]}")
    for key in sorted(entries):
        vec = entries[key]
        if len(vec) != dimension:
            raise ValueError(f"vector for {key!r} has length {len(vec)}, expected {dimension}")
        lines.append(key + "\t" + " ".join(repr(float(x)) for x in vec))
    return "\n".join(lines) + "\n"
