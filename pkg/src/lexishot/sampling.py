"""Seeded shot selection: random baseline, lexicon-first two-step sampling,
data complementing, and slur/target distribution reporting.

All selection is without replacement and fully determined by the config seed:
candidates are keyed by example id, sorted, and drawn via the portable
generator in :mod:`lexishot.rng`, so results are identical across runs,
platforms and pool input orderings. Each stage draws from its own labeled
sub-stream of the seed ("sample:random", "sample:lexicon", "complement:+l",
"complement:+r").

Lexicon-first sampling works in two steps: first take every pool example that
contains a slur or a target term (Neutral-only matches do not qualify); then,
if slots remain, fill them with a uniform draw from the rest of the pool. If
the bearing examples alone exceed the requested size, the shots are a uniform
draw from the bearing examples only.

Complementing adds examples from the pool that are not already in the base
set: ``+l`` draws half the complement from target-bearing and half from
slur-bearing examples, alternating buckets draw by draw so an example bearing
both types goes to whichever bucket draws it first; ``+r`` draws the
complement uniformly. When a bucket runs out of eligible examples the
shortfall is recorded on the result rather than raised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

from .corpus import Example
from .lexicon import Lexicon
from .matching import MatchReport, classify_example
from .rng import SplitMix64, sample_sorted, stream


class SamplingMethod(Enum):
    RANDOM = "Random"
    LEXICON = "Lexicon"


class ComplementKind(Enum):
    PLUS_L = "+l"
    PLUS_R = "+r"


# Per-example origin tags recorded in the provenance.
ORIGIN_LEXICON = "lexicon-selected"
ORIGIN_RANDOM = "random-fill"
ORIGIN_COMPLEMENT_TARGET = "complement-target"
ORIGIN_COMPLEMENT_SLUR = "complement-slur"
ORIGIN_COMPLEMENT_RANDOM = "complement-random"


@dataclass(frozen=True)
class SamplingConfig:
    """How a shot set was (or is to be) drawn."""

    method: SamplingMethod
    size: int
    seed: int
    complement: ComplementKind | None = None
    complement_size: int = 0

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"size must be >= 1, got {self.size}")
        if self.complement is not None:
            if self.complement_size < 1:
                raise ValueError("complement_size must be >= 1 when complementing")
            if self.complement is ComplementKind.PLUS_L and self.complement_size % 2:
                raise ValueError(
                    f"+l complement size must be even (half targets, half slurs), "
                    f"got {self.complement_size}"
                )
        elif self.complement_size:
            raise ValueError("complement_size given without a complement kind")

    def label(self) -> str:
        """Display label, e.g. ``Lexicon_96`` or ``Random_64+l``."""
        suffix = self.complement.value if self.complement else ""
        return f"{self.method.value}_{self.size}{suffix}"


@dataclass(frozen=True)
class ShotEntry:
    """One selected example with its provenance."""

    example: Example
    origin: str
    matched_terms: tuple[str, ...] = ()


@dataclass(frozen=True)
class ShotSet:
    """A sampled training set: entries in ascending example-id order, the
    config that produced it, and any recorded per-bucket shortfall."""

    config: SamplingConfig
    entries: tuple[ShotEntry, ...]
    shortfall: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        ids = [e.example.id for e in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError("shot set contains duplicate example ids")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def examples(self) -> tuple[Example, ...]:
        return tuple(e.example for e in self.entries)

    def ids(self) -> frozenset[str]:
        return frozenset(e.example.id for e in self.entries)


def _check_pool(pool: Sequence[Example], size: int) -> dict[str, Example]:
    by_id: dict[str, Example] = {}
    for ex in pool:
        if ex.id in by_id:
            raise ValueError(f"pool contains duplicate example id {ex.id!r}")
        by_id[ex.id] = ex
    if len(by_id) < size:
        raise ValueError(f"pool has {len(by_id)} examples but {size} were requested")
    return by_id


def _sorted_entries(entries: Iterable[ShotEntry]) -> tuple[ShotEntry, ...]:
    return tuple(sorted(entries, key=lambda e: e.example.id))


def _pool_languages(pool: Sequence[Example]) -> set[str] | None:
    """Languages present in the pool; None (no restriction) when the pool
    carries no language information."""
    langs = {ex.language for ex in pool if ex.language}
    return langs or None


def _reports(
    pool: Sequence[Example],
    lexicon: Lexicon,
    language_filter: Iterable[str] | None,
) -> dict[str, MatchReport]:
    return {ex.id: classify_example(ex, lexicon, language_filter) for ex in pool}


def _matched_surfaces(report: MatchReport) -> tuple[str, ...]:
    return tuple(sorted({m.term.surface for m in report.matches}))


def sample_random(pool: Sequence[Example], config: SamplingConfig) -> ShotSet:
    """Uniform sample of ``config.size`` examples without replacement."""
    if config.method is not SamplingMethod.RANDOM:
        raise ValueError(f"sample_random called with method {config.method.value}")
    by_id = _check_pool(pool, config.size)
    chosen = sample_sorted(list(by_id), config.size, stream(config.seed, "sample:random"))
    entries = [ShotEntry(by_id[ex_id], ORIGIN_RANDOM) for ex_id in chosen]
    return ShotSet(config, _sorted_entries(entries))


def sample_lexicon_first(
    pool: Sequence[Example],
    lexicon: Lexicon,
    config: SamplingConfig,
    language_filter: Iterable[str] | None = None,
) -> ShotSet:
    """Two-step selection: all slur- or target-bearing examples first, then a
    uniform fill from the remainder of the pool.

    ``language_filter`` restricts which lexicon entries may match; by default
    the languages present in the pool are used.
    """
    if config.method is not SamplingMethod.LEXICON:
        raise ValueError(f"sample_lexicon_first called with method {config.method.value}")
    by_id = _check_pool(pool, config.size)
    if language_filter is None:
        language_filter = _pool_languages(pool)
    reports = _reports(pool, lexicon, language_filter)
    bearing = sorted(
        ex_id for ex_id, rep in reports.items() if rep.has_slur or rep.has_target
    )
    rng = stream(config.seed, "sample:lexicon")
    entries: list[ShotEntry] = []
    if len(bearing) <= config.size:
        for ex_id in bearing:
            entries.append(
                ShotEntry(by_id[ex_id], ORIGIN_LEXICON, _matched_surfaces(reports[ex_id]))
            )
        rest = [ex_id for ex_id in by_id if ex_id not in set(bearing)]
        fill = sample_sorted(rest, config.size - len(bearing), rng)
        for ex_id in fill:
            entries.append(ShotEntry(by_id[ex_id], ORIGIN_RANDOM))
    else:
        for ex_id in sample_sorted(bearing, config.size, rng):
            entries.append(
                ShotEntry(by_id[ex_id], ORIGIN_LEXICON, _matched_surfaces(reports[ex_id]))
            )
    return ShotSet(config, _sorted_entries(entries))


def _draw_buckets(
    candidates: list[str],
    by_id: Mapping[str, Example],
    reports: Mapping[str, MatchReport],
    buckets: Sequence[tuple[str, Callable[[MatchReport], bool], int]],
    rng: SplitMix64,
) -> tuple[list[ShotEntry], dict[str, int]]:
    """Draw bucketed complements, alternating buckets one pick at a time.

    Each draw is uniform over the id-sorted eligible remainder; a drawn
    example is used once even when it is eligible for both buckets.
    """
    need = {origin: count for origin, _, count in buckets}
    used: set[str] = set()
    picked: list[ShotEntry] = []
    shortfall: dict[str, int] = {}
    while any(need.values()):
        progressed = False
        for origin, predicate, _ in buckets:
            if need[origin] <= 0:
                continue
            eligible = [c for c in candidates if c not in used and predicate(reports[c])]
            if not eligible:
                shortfall[origin] = need[origin]
                need[origin] = 0
                continue
            ex_id = eligible[rng.randbelow(len(eligible))]
            used.add(ex_id)
            need[origin] -= 1
            progressed = True
            picked.append(
                ShotEntry(by_id[ex_id], origin, _matched_surfaces(reports[ex_id]))
            )
        if not progressed:
            break
    return picked, shortfall


def complement(
    base: ShotSet,
    pool: Sequence[Example],
    lexicon: Lexicon,
    config: SamplingConfig,
    language_filter: Iterable[str] | None = None,
) -> ShotSet:
    """Extend ``base`` with complement examples drawn from ``pool`` minus the
    base set.

    ``+l`` draws complement_size/2 target-bearing plus complement_size/2
    slur-bearing examples; ``+r`` draws complement_size examples uniformly.
    Running out of eligible examples records a shortfall instead of failing.
    """
    if config.complement is None:
        raise ValueError("complement() requires a config with a complement kind")
    by_id = _check_pool(pool, 0)
    base_ids = base.ids()
    missing = base_ids - set(by_id)
    if missing:
        raise ValueError(
            f"base examples not present in pool: {', '.join(sorted(missing))}"
        )
    candidates = sorted(ex_id for ex_id in by_id if ex_id not in base_ids)
    if language_filter is None:
        language_filter = _pool_languages(pool)
    shortfall: dict[str, int]
    if config.complement is ComplementKind.PLUS_L:
        reports = _reports([by_id[c] for c in candidates], lexicon, language_filter)
        half = config.complement_size // 2
        rng = stream(config.seed, "complement:+l")
        picked, shortfall = _draw_buckets(
            candidates,
            by_id,
            reports,
            (
                (ORIGIN_COMPLEMENT_TARGET, lambda r: r.has_target, half),
                (ORIGIN_COMPLEMENT_SLUR, lambda r: r.has_slur, half),
            ),
            rng,
        )
    else:
        rng = stream(config.seed, "complement:+r")
        take = min(config.complement_size, len(candidates))
        shortfall = {}
        if take < config.complement_size:
            shortfall[ORIGIN_COMPLEMENT_RANDOM] = config.complement_size - take
        picked = [
            ShotEntry(by_id[ex_id], ORIGIN_COMPLEMENT_RANDOM)
            for ex_id in sample_sorted(candidates, take, rng)
        ]
    return ShotSet(config, _sorted_entries(list(base.entries) + picked), shortfall)


@dataclass(frozen=True)
class SetDistribution:
    """Distinct slur (S) and target (T) lexicon terms present in one set."""

    label: str
    slur_terms: tuple[str, ...]
    target_terms: tuple[str, ...]

    @property
    def s(self) -> int:
        return len(self.slur_terms)

    @property
    def t(self) -> int:
        return len(self.target_terms)


@dataclass(frozen=True)
class DistributionReport:
    rows: tuple[SetDistribution, ...]


def distribution_report(
    sets: Sequence[ShotSet],
    lexicon: Lexicon,
    labels: Sequence[str] | None = None,
    language_filter: Iterable[str] | None = None,
) -> DistributionReport:
    """Count the distinct slur and target terms present in each shot set.

    A term is counted once per set regardless of frequency; a Target/Slur
    term counts toward both S and T. Labels default to each set's config
    label.
    """
    if labels is not None and len(labels) != len(sets):
        raise ValueError(f"{len(labels)} labels for {len(sets)} sets")
    rows = []
    for i, shot_set in enumerate(sets):
        filt = language_filter
        if filt is None:
            filt = _pool_languages(shot_set.examples)
        slurs: set[str] = set()
        targets: set[str] = set()
        for ex in shot_set.examples:
            for match in classify_example(ex, lexicon, filt).matches:
                if match.term.is_slur:
                    slurs.add(match.term.surface)
                if match.term.is_target:
                    targets.add(match.term.surface)
        label = labels[i] if labels is not None else shot_set.config.label()
        rows.append(SetDistribution(label, tuple(sorted(slurs)), tuple(sorted(targets))))
    return DistributionReport(tuple(rows))


def render_distribution_table(report: DistributionReport) -> str:
    """Aligned text table: one row per set, S and T columns."""
    rows = [("Set", "S", "T")]
    rows += [(d.label, str(d.s), str(d.t)) for d in report.rows]
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    return "\n".join(
        "  ".join((r[0].ljust(widths[0]), r[1].rjust(widths[1]), r[2].rjust(widths[2]))).rstrip()
        for r in rows
    )


def _config_to_header(config: SamplingConfig, shortfall: Mapping[str, int]) -> dict:
    header: dict = {
        "method": config.method.value,
        "size": config.size,
        "seed": config.seed,
        "complement": (
            {"kind": config.complement.value, "size": config.complement_size}
            if config.complement
            else None
        ),
    }
    if shortfall:
        header["shortfall"] = dict(sorted(shortfall.items()))
    return header


def dump_shot_set(shot_set: ShotSet) -> str:
    """ShotSet JSONL: a header line followed by one line per example."""
    lines = [json.dumps(_config_to_header(shot_set.config, shot_set.shortfall), ensure_ascii=False)]
    for entry in shot_set.entries:
        lines.append(
            json.dumps(
                {
                    "id": entry.example.id,
                    "label": entry.example.label,
                    "text": entry.example.text,
                    "origin": entry.origin,
                    "matched_terms": list(entry.matched_terms),
                },
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + "\n"


def load_shot_set(source: str, corpus: Sequence[Example] | None = None) -> ShotSet:
    """Parse ShotSet JSONL.

    When ``corpus`` is given, examples are resolved against it by id (errors
    if an id is missing), recovering fields the JSONL does not carry
    (language); otherwise examples are rebuilt from the JSONL alone.
    """
    lines = [ln for ln in source.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty shot set file")
    header = json.loads(lines[0])
    comp = header.get("complement")
    config = SamplingConfig(
        method=SamplingMethod(header["method"]),
        size=int(header["size"]),
        seed=int(header["seed"]),
        complement=ComplementKind(comp["kind"]) if comp else None,
        complement_size=int(comp["size"]) if comp else 0,
    )
    by_id = {ex.id: ex for ex in corpus} if corpus is not None else None
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        rec = json.loads(line)
        if by_id is not None:
            if rec["id"] not in by_id:
                raise ValueError(f"line {lineno}: shot id {rec['id']!r} not in corpus")
            example = by_id[rec["id"]]
        else:
            example = Example(rec["id"], rec["label"], "", rec["text"])
        entries.append(
            ShotEntry(example, rec["origin"], tuple(rec.get("matched_terms", ())))
        )
    return ShotSet(config, tuple(entries), dict(header.get("shortfall", {})))
