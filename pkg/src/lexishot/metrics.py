"""Classification metrics over prediction files: per-class and macro
precision/recall/F1, multi-seed aggregation, and shot-set scoring.

Conventions, fixed here and covered by tests: a precision, recall or F1
whose denominator is zero is 0; macro values are unweighted means over the
*declared* label set, so a declared class with no support still contributes
a zero; across-seed spread defaults to the sample standard deviation (n-1),
with a population option.

Predictions TSV: ``id <TAB> gold <TAB> pred``, labels from a declared finite
label set (binary {HOF, NOT} for the main task).
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .sampling import ShotSet


class PredictionFormatError(ValueError):
    """Raised for malformed prediction rows; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class PredictionRecord:
    example_id: str
    gold: str
    pred: str


def load_predictions(source: str, labels: Sequence[str]) -> list[PredictionRecord]:
    """Parse predictions TSV, validating labels and id uniqueness."""
    label_set = set(labels)
    records: list[PredictionRecord] = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = raw.split("\t")
        if len(cols) != 3:
            raise PredictionFormatError(
                lineno, f"expected 3 tab-separated columns, got {len(cols)}"
            )
        ex_id, gold, pred = (c.strip() for c in cols)
        for value, role in ((gold, "gold"), (pred, "pred")):
            if value not in label_set:
                raise PredictionFormatError(
                    lineno,
                    f"undeclared {role} label {value!r} (declared: {sorted(label_set)})",
                )
        if ex_id in seen:
            raise PredictionFormatError(
                lineno, f"duplicate id {ex_id!r}; first seen on line {seen[ex_id]}"
            )
        seen[ex_id] = lineno
        records.append(PredictionRecord(ex_id, gold, pred))
    return records


def dump_predictions(records: Sequence[PredictionRecord]) -> str:
    lines = [f"{r.example_id}\t{r.gold}\t{r.pred}" for r in records]
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: float


@dataclass(frozen=True)
class MetricSpread:
    """Standard deviations matching the shape of a :class:`MetricSummary`."""

    per_class: Mapping[str, ClassScores]
    macro_precision: float
    macro_recall: float
    macro_f1: float


@dataclass(frozen=True)
class MetricSummary:
    """Per-class and macro scores; ``std`` is set on across-seed aggregates."""

    labels: tuple[str, ...]
    per_class: Mapping[str, ClassScores]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    n_runs: int = 1
    std: MetricSpread | None = None


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def macro_scores(
    records: Sequence[PredictionRecord], labels: Sequence[str]
) -> MetricSummary:
    """Per-class P/R/F1 and their unweighted macro means.

    ``labels`` is the declared label set; declared classes absent from the
    records still enter the macro mean with zero scores.
    """
    if not records:
        raise ValueError("no prediction records")
    declared = tuple(dict.fromkeys(labels))
    label_set = set(declared)
    for position, rec in enumerate(records, start=1):
        for value, role in ((rec.gold, "gold"), (rec.pred, "pred")):
            if value not in label_set:
                raise ValueError(
                    f"record {position} (id {rec.example_id!r}): undeclared {role} "
                    f"label {value!r}"
                )
    per_class: dict[str, ClassScores] = {}
    for label in declared:
        tp = sum(1 for r in records if r.gold == label and r.pred == label)
        fp = sum(1 for r in records if r.gold != label and r.pred == label)
        fn = sum(1 for r in records if r.gold == label and r.pred != label)
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class[label] = ClassScores(precision, recall, f1, float(tp + fn))
    n = len(declared)
    return MetricSummary(
        labels=declared,
        per_class=per_class,
        macro_precision=sum(c.precision for c in per_class.values()) / n,
        macro_recall=sum(c.recall for c in per_class.values()) / n,
        macro_f1=sum(c.f1 for c in per_class.values()) / n,
    )


def _spread(values: Sequence[float], population: bool) -> float:
    if len(values) < 2:
        return 0.0
    return statistics.pstdev(values) if population else statistics.stdev(values)


def aggregate_seeds(
    summaries: Sequence[MetricSummary], population: bool = False
) -> MetricSummary:
    """Mean and standard deviation per metric across per-seed summaries.

    All summaries must share the label set. ``population`` switches the
    spread from sample (n-1, the default) to population standard deviation.
    """
    if not summaries:
        raise ValueError("no summaries to aggregate")
    labels = summaries[0].labels
    for s in summaries[1:]:
        if set(s.labels) != set(labels):
            raise ValueError(
                f"label sets differ: {sorted(labels)} vs {sorted(s.labels)}"
            )
    mean_classes: dict[str, ClassScores] = {}
    std_classes: dict[str, ClassScores] = {}
    for label in labels:
        scores = [s.per_class[label] for s in summaries]
        mean_classes[label] = ClassScores(
            statistics.fmean(c.precision for c in scores),
            statistics.fmean(c.recall for c in scores),
            statistics.fmean(c.f1 for c in scores),
            statistics.fmean(c.support for c in scores),
        )
        std_classes[label] = ClassScores(
            _spread([c.precision for c in scores], population),
            _spread([c.recall for c in scores], population),
            _spread([c.f1 for c in scores], population),
            _spread([c.support for c in scores], population),
        )
    return MetricSummary(
        labels=labels,
        per_class=mean_classes,
        macro_precision=statistics.fmean(s.macro_precision for s in summaries),
        macro_recall=statistics.fmean(s.macro_recall for s in summaries),
        macro_f1=statistics.fmean(s.macro_f1 for s in summaries),
        n_runs=sum(s.n_runs for s in summaries),
        std=MetricSpread(
            per_class=std_classes,
            macro_precision=_spread([s.macro_precision for s in summaries], population),
            macro_recall=_spread([s.macro_recall for s in summaries], population),
            macro_f1=_spread([s.macro_f1 for s in summaries], population),
        ),
    )


def score_shot_set(
    shots: ShotSet,
    predictions: Sequence[PredictionRecord],
    labels: Sequence[str] | None = None,
) -> MetricSummary:
    """Macro scores restricted to the shot set's example ids.

    Every shot id must have a prediction, and the prediction's gold label
    must agree with the shot's own label.
    """
    by_id = {r.example_id: r for r in predictions}
    missing = sorted(shots.ids() - set(by_id))
    if missing:
        raise ValueError(f"no prediction for shot ids: {', '.join(missing)}")
    mismatched = sorted(
        e.example.id
        for e in shots.entries
        if by_id[e.example.id].gold != e.example.label
    )
    if mismatched:
        raise ValueError(
            f"gold label disagrees with shot label for ids: {', '.join(mismatched)}"
        )
    restricted = [by_id[e.example.id] for e in shots.entries]
    if labels is None:
        labels = sorted({r.gold for r in restricted} | {r.pred for r in restricted})
    return macro_scores(restricted, labels)


def summary_to_dict(summary: MetricSummary) -> dict:
    out: dict = {
        "labels": list(summary.labels),
        "per_class": {
            label: {
                "precision": c.precision,
                "recall": c.recall,
                "f1": c.f1,
                "support": c.support,
            }
            for label, c in summary.per_class.items()
        },
        "macro_precision": summary.macro_precision,
        "macro_recall": summary.macro_recall,
        "macro_f1": summary.macro_f1,
        "n_runs": summary.n_runs,
    }
    if summary.std is not None:
        out["std"] = {
            "per_class": {
                label: {
                    "precision": c.precision,
                    "recall": c.recall,
                    "f1": c.f1,
                    "support": c.support,
                }
                for label, c in summary.std.per_class.items()
            },
            "macro_precision": summary.std.macro_precision,
            "macro_recall": summary.std.macro_recall,
            "macro_f1": summary.std.macro_f1,
        }
    return out


def summary_json(summary: MetricSummary) -> str:
    return json.dumps(summary_to_dict(summary), ensure_ascii=False, indent=2)


def render_summary_table(summary: MetricSummary) -> str:
    """Aligned per-class and macro table for one summary."""
    rows = [("Class", "P", "R", "F1", "Support")]
    for label in summary.labels:
        c = summary.per_class[label]
        rows.append(
            (label, f"{c.precision:.4f}", f"{c.recall:.4f}", f"{c.f1:.4f}", f"{c.support:g}")
        )
    rows.append(
        (
            "macro",
            f"{summary.macro_precision:.4f}",
            f"{summary.macro_recall:.4f}",
            f"{summary.macro_f1:.4f}",
            "",
        )
    )
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def format_score(summary: MetricSummary) -> str:
    """Paper-style cell: macro F1 to two decimals, std x100 as suffix when
    aggregated (e.g. ``0.55_1.0``)."""
    cell = f"{summary.macro_f1:.2f}"
    if summary.std is not None:
        cell += f"_{summary.std.macro_f1 * 100:.1f}"
    return cell


def render_results_grid(
    cells: Mapping[tuple[str, str], MetricSummary],
    row_labels: Sequence[str],
    col_labels: Sequence[str],
) -> str:
    """Text table with one row per set and one column per language."""
    rows = [("Set", *col_labels)]
    for row in row_labels:
        cells_out = []
        for col in col_labels:
            summary = cells.get((row, col))
            cells_out.append(format_score(summary) if summary is not None else "-")
        rows.append((row, *cells_out))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells_txt = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells_txt).rstrip())
    return "\n".join(lines)
