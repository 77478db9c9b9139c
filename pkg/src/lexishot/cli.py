"""Command-line interface: one executable, one subcommand per pipeline stage.

Every command reads and writes the plain-text formats defined by the owning
modules, all randomness is controlled by ``--seed``/``--seeds``, and outputs
are byte-identical for identical inputs and flags (no timestamps unless
``--timestamp iso`` is requested).

Exit codes: 0 success, 1 data/validation error, 2 usage error.

A ``--config FILE`` of ``key=value`` lines mirrors any long flag of the
subcommand (keys may use ``_`` for ``-``); flags given on the command line
win. Input paths that do not exist are also tried relative to the
``LEXISHOT_DATA`` directory when that variable is set.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import interp, matching, metrics, sampling
from .corpus import DEFAULT_LABELS, Example, load_corpus
from .lexicon import (
    STAT_BUCKETS,
    Lexicon,
    compute_stats,
    load_lexicon,
    render_stats_table,
    validate_against_declared,
)

ENV_DATA_DIR = "LEXISHOT_DATA"


class _CliDataError(Exception):
    """Wraps a data error message for exit code 1."""


def _resolve_input(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    data_dir = os.environ.get(ENV_DATA_DIR)
    if data_dir:
        candidate = Path(data_dir) / path
        if candidate.exists():
            return candidate
    return p


def _read_text(path: str) -> str:
    resolved = _resolve_input(path)
    try:
        return resolved.read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliDataError(f"{path}: {exc.strerror or exc}") from exc


def _write_text(path: str | None, content: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(content)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)


def _load_lexicon_file(path: str) -> Lexicon:
    try:
        return load_lexicon(_read_text(path))
    except ValueError as exc:
        raise _CliDataError(f"{path}: {exc}") from exc


def _load_corpus_file(path: str, labels: Sequence[str]) -> list[Example]:
    try:
        return load_corpus(_read_text(path), labels)
    except ValueError as exc:
        raise _CliDataError(f"{path}: {exc}") from exc


def _parse_labels(spec: str) -> tuple[str, ...]:
    labels = tuple(part.strip() for part in spec.split(",") if part.strip())
    if len(labels) < 2:
        raise _CliDataError(f"need at least two labels, got {spec!r}")
    return labels


def _parse_seeds(args: argparse.Namespace) -> list[int]:
    if getattr(args, "seeds", None):
        try:
            return [int(part) for part in args.seeds.split(",") if part.strip()]
        except ValueError:
            raise _CliDataError(f"bad --seeds value {args.seeds!r}") from None
    if getattr(args, "seed", None) is not None:
        return [args.seed]
    raise _CliDataError("one of --seed or --seeds is required")


def _timestamp_field(args: argparse.Namespace) -> dict:
    if getattr(args, "timestamp", "none") == "iso":
        return {"generated_at": datetime.now(timezone.utc).isoformat()}
    return {}


def _json_out(payload: dict, args: argparse.Namespace) -> str:
    payload = {**payload, **_timestamp_field(args)}
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def _map_ordered(func: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_lexicon_stats(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon_file(args.lexicon)
    stats = compute_stats(lexicon)
    if args.output:
        payload = {
            "countries": {
                country: {
                    **{bucket: cs.counts.get(bucket, 0) for bucket in STAT_BUCKETS},
                    "total": cs.total,
                }
                for country, cs in stats.by_country.items()
            }
        }
        _write_text(args.output, _json_out(payload, args))
    print(render_stats_table(stats))
    return 0


def _parse_declared(specs: Iterable[str]) -> dict[str, int]:
    declared: dict[str, int] = {}
    for spec in specs:
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            country, _, number = part.partition("=")
            if not number:
                raise _CliDataError(
                    f"bad --declared entry {part!r} (expected COUNTRY=COUNT)"
                )
            try:
                declared[country.strip()] = int(number)
            except ValueError:
                raise _CliDataError(f"bad count in --declared entry {part!r}") from None
    return declared


def _cmd_lexicon_validate(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon_file(args.lexicon)
    stats = compute_stats(lexicon)
    if not args.declared:
        print(f"OK: {len(lexicon)} terms across {len(stats.by_country)} countries")
        return 0
    declared = _parse_declared(args.declared)
    discrepancies = validate_against_declared(stats, declared)
    if args.output:
        payload = {
            "discrepancies": [
                {"country": d.country, "computed": d.computed, "declared": d.declared}
                for d in discrepancies
            ]
        }
        _write_text(args.output, _json_out(payload, args))
    if not discrepancies:
        print("totals match declared counts")
        return 0
    for d in discrepancies:
        print(f"{d.country}: computed total {d.computed} != declared {d.declared}")
    return 1


def _cmd_match(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon_file(args.lexicon)
    examples = _load_corpus_file(args.corpus, _parse_labels(args.labels))
    languages = set(args.language) if args.language else None

    def classify(example: Example) -> str:
        return matching.match_report_json(
            matching.classify_example(example, lexicon, languages)
        )

    lines = _map_ordered(classify, examples, args.jobs)
    _write_text(args.output, "\n".join(lines) + ("\n" if lines else ""))
    return 0


def _sample_one(
    args: argparse.Namespace,
    pool: list[Example],
    lexicon: Lexicon | None,
    seed: int,
) -> sampling.ShotSet:
    method = sampling.SamplingMethod(args.method.capitalize())
    config = sampling.SamplingConfig(method=method, size=args.size, seed=seed)
    if method is sampling.SamplingMethod.LEXICON:
        if lexicon is None:
            raise _CliDataError("--lexicon is required for --method lexicon")
        languages = set(args.language) if args.language else None
        return sampling.sample_lexicon_first(pool, lexicon, config, languages)
    return sampling.sample_random(pool, config)


def _seed_output_path(template: str, seed: int, multi: bool) -> str:
    if "{seed}" in template:
        return template.replace("{seed}", str(seed))
    if not multi:
        return template
    p = Path(template)
    return str(p.with_name(f"{p.stem}_seed{seed}{p.suffix}"))


def _cmd_sample(args: argparse.Namespace) -> int:
    labels = _parse_labels(args.labels)
    pool = _load_corpus_file(args.corpus, labels)
    lexicon = _load_lexicon_file(args.lexicon) if args.lexicon else None
    seeds = _parse_seeds(args)
    multi = len(seeds) > 1
    if multi and not args.output:
        raise _CliDataError("--seeds needs -o/--output (a path or '{seed}' template)")
    per_seed = []
    languages = set(args.language) if args.language else None
    for seed in seeds:
        shot_set = _sample_one(args, pool, lexicon, seed)
        out_path = (
            _seed_output_path(args.output, seed, multi) if args.output else None
        )
        _write_text(out_path, sampling.dump_shot_set(shot_set))
        if lexicon is not None:
            report = sampling.distribution_report([shot_set], lexicon, None, languages)
            row = report.rows[0]
            per_seed.append({"seed": seed, "S": row.s, "T": row.t})
    if per_seed and (multi or args.output):
        payload: dict = {"sets": per_seed}
        if multi:
            s_values = [float(r["S"]) for r in per_seed]
            t_values = [float(r["T"]) for r in per_seed]
            payload["mean"] = {
                "S": statistics.fmean(s_values),
                "T": statistics.fmean(t_values),
            }
            payload["std"] = {
                "S": statistics.stdev(s_values) if len(s_values) > 1 else 0.0,
                "T": statistics.stdev(t_values) if len(t_values) > 1 else 0.0,
            }
        print(json.dumps(payload, ensure_ascii=False))
    return 0


def _cmd_complement(args: argparse.Namespace) -> int:
    labels = _parse_labels(args.labels)
    pool = _load_corpus_file(args.corpus, labels)
    lexicon = _load_lexicon_file(args.lexicon)
    try:
        base = sampling.load_shot_set(_read_text(args.base), pool)
    except ValueError as exc:
        raise _CliDataError(f"{args.base}: {exc}") from exc
    kind = sampling.ComplementKind.PLUS_L if args.kind == "l" else sampling.ComplementKind.PLUS_R
    seed = args.seed if args.seed is not None else base.config.seed
    config = sampling.SamplingConfig(
        method=base.config.method,
        size=base.config.size,
        seed=seed,
        complement=kind,
        complement_size=args.complement_size,
    )
    languages = set(args.language) if args.language else None
    result = sampling.complement(base, pool, lexicon, config, languages)
    _write_text(args.output, sampling.dump_shot_set(result))
    for origin, count in sorted(result.shortfall.items()):
        print(f"warning: {origin} short by {count} examples", file=sys.stderr)
    return 0


def _cmd_distribution(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon_file(args.lexicon)
    corpus = (
        _load_corpus_file(args.corpus, _parse_labels(args.labels))
        if args.corpus
        else None
    )
    sets = []
    for path in args.shots:
        try:
            sets.append(sampling.load_shot_set(_read_text(path), corpus))
        except ValueError as exc:
            raise _CliDataError(f"{path}: {exc}") from exc
    labels_override = args.label if args.label else None
    if labels_override and len(labels_override) != len(sets):
        raise _CliDataError(
            f"{len(labels_override)} --label values for {len(sets)} shot files"
        )
    languages = set(args.language) if args.language else None
    report = sampling.distribution_report(sets, lexicon, labels_override, languages)
    if args.output:
        payload = {
            "sets": [
                {
                    "label": row.label,
                    "S": row.s,
                    "T": row.t,
                    "slur_terms": list(row.slur_terms),
                    "target_terms": list(row.target_terms),
                }
                for row in report.rows
            ]
        }
        _write_text(args.output, _json_out(payload, args))
    print(sampling.render_distribution_table(report))
    return 0


def _cmd_annotate_words(args: argparse.Namespace) -> int:
    lexicon = _load_lexicon_file(args.lexicon)
    words = [
        line.strip()
        for line in _read_text(args.words).splitlines()
        if line.strip() and not line.startswith("#")
    ]
    annotated = interp.annotate_words(words, lexicon, args.country)
    if args.output:
        _write_text(args.output, interp.annotation_json(annotated) + "\n")
    summary = annotated.summary
    print(
        f"{args.country}: {interp.summary_phrase(summary)} "
        f"({summary.both} both, {summary.unmatched} unmatched)"
    )
    return 0


def _build_groups(args: argparse.Namespace, before: interp.EmbeddingTable) -> dict:
    groups: dict[str, list[str]] = {}
    if args.groups:
        try:
            raw = json.loads(_read_text(args.groups))
        except json.JSONDecodeError as exc:
            raise _CliDataError(f"{args.groups}: {exc}") from exc
        if not isinstance(raw, dict):
            raise _CliDataError(f"{args.groups}: expected an object of name -> terms")
        groups.update({str(k): [str(t) for t in v] for k, v in raw.items()})
    if args.lexicon and args.country:
        lexicon = _load_lexicon_file(args.lexicon).subset(countries=[args.country])
        slurs = sorted(t.surface for t in lexicon.terms if t.is_slur)
        targets = sorted(t.surface for t in lexicon.terms if t.is_target and not t.is_slur)
        if slurs:
            groups["Slurs"] = slurs
        if targets:
            groups["Targets"] = targets
    if args.stopwords:
        try:
            groups["Stop"] = list(interp.load_stopwords(args.stopwords))
        except ValueError as exc:
            raise _CliDataError(str(exc)) from exc
    if args.random_pool:
        taken = {term for terms in groups.values() for term in terms}
        candidates = sorted(
            {
                line.strip()
                for line in _read_text(args.random_pool).splitlines()
                if line.strip() and not line.startswith("#")
            }
            - taken
        )
        k = sum(len(groups.get(name, ())) for name in ("Slurs", "Targets"))
        if not k:
            raise _CliDataError("--random-pool needs Slurs/Targets groups to size against")
        if args.seed is None:
            raise _CliDataError("--random-pool requires --seed")
        candidates = [c for c in candidates if c in before]
        if len(candidates) < k:
            raise _CliDataError(
                f"random pool has {len(candidates)} usable words, need {k}"
            )
        groups["Random"] = interp.sample_random_words(candidates, k, args.seed)
    if not groups:
        raise _CliDataError("no groups: pass --groups or --lexicon with --country")
    return groups


def _cmd_rep_shift(args: argparse.Namespace) -> int:
    try:
        before = interp.load_embedding_table(_read_text(args.before))
    except ValueError as exc:
        raise _CliDataError(f"{args.before}: {exc}") from exc
    try:
        after = interp.load_embedding_table(_read_text(args.after))
    except ValueError as exc:
        raise _CliDataError(f"{args.after}: {exc}") from exc
    groups = _build_groups(args, before)
    try:
        report = interp.shift_report(before, after, groups, args.metric)
    except ValueError as exc:
        raise _CliDataError(str(exc)) from exc
    if args.output:
        _write_text(args.output, interp.shift_report_json(report) + "\n")
    print(interp.render_shift_table(report))
    return 0


def _load_prediction_file(path: str, labels: Sequence[str]) -> list[metrics.PredictionRecord]:
    try:
        return metrics.load_predictions(_read_text(path), labels)
    except ValueError as exc:
        raise _CliDataError(f"{path}: {exc}") from exc


def _cmd_eval(args: argparse.Namespace) -> int:
    labels = _parse_labels(args.labels)
    summaries = []
    for path in args.pred:
        records = _load_prediction_file(path, labels)
        try:
            summaries.append(metrics.macro_scores(records, labels))
        except ValueError as exc:
            raise _CliDataError(f"{path}: {exc}") from exc
    if len(summaries) == 1:
        final = summaries[0]
        payload = {"summary": metrics.summary_to_dict(final)}
    else:
        final = metrics.aggregate_seeds(summaries, population=args.std == "population")
        payload = {
            "runs": [metrics.summary_to_dict(s) for s in summaries],
            "aggregate": metrics.summary_to_dict(final),
        }
    if args.output:
        _write_text(args.output, _json_out(payload, args))
    print(metrics.render_summary_table(final))
    print(f"macro F1: {metrics.format_score(final)}")
    return 0


def _cmd_eval_shots(args: argparse.Namespace) -> int:
    labels = _parse_labels(args.labels)
    try:
        shots = sampling.load_shot_set(_read_text(args.shots))
    except ValueError as exc:
        raise _CliDataError(f"{args.shots}: {exc}") from exc
    records = _load_prediction_file(args.pred, labels)
    try:
        summary = metrics.score_shot_set(shots, records, labels)
    except ValueError as exc:
        raise _CliDataError(str(exc)) from exc
    if args.output:
        _write_text(args.output, _json_out({"summary": metrics.summary_to_dict(summary)}, args))
    print(metrics.render_summary_table(summary))
    print(f"macro F1: {metrics.format_score(summary)}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexishot",
        description="Lexicon-driven corpus tooling: matching, sampling, reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file mirroring this command's flags")
    common.add_argument(
        "--timestamp",
        choices=("none", "iso"),
        default="none",
        help="add a generation timestamp to JSON reports (default: none)",
    )

    p = sub.add_parser("lexicon-stats", parents=[common], help="per-country type statistics")
    p.add_argument("--lexicon", required=True)
    p.add_argument("-o", "--output", help="also write stats as JSON")
    p.set_defaults(func=_cmd_lexicon_stats)

    p = sub.add_parser(
        "lexicon-validate", parents=[common], help="check format and declared totals"
    )
    p.add_argument("--lexicon", required=True)
    p.add_argument(
        "--declared",
        action="append",
        default=[],
        help="declared totals, e.g. 'Germany=50,India=50' (repeatable)",
    )
    p.add_argument("-o", "--output", help="write discrepancies as JSON")
    p.set_defaults(func=_cmd_lexicon_validate)

    p = sub.add_parser("match", parents=[common], help="term matches per corpus row (JSONL)")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", default=",".join(DEFAULT_LABELS))
    p.add_argument("--language", action="append", help="restrict lexicon languages (repeatable)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", help="output JSONL path (default: stdout)")
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("sample", parents=[common], help="draw a seeded shot set")
    p.add_argument("--method", required=True, choices=("random", "lexicon"))
    p.add_argument("--size", required=True, type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", help="comma-separated seeds; writes one file per seed")
    p.add_argument("--lexicon", help="required for --method lexicon")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", default=",".join(DEFAULT_LABELS))
    p.add_argument("--language", action="append")
    p.add_argument("-o", "--output", help="shot JSONL path; '{seed}' expands per seed")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("complement", parents=[common], help="extend a shot set (+l / +r)")
    p.add_argument("--base", required=True, help="existing shot set JSONL")
    p.add_argument("--corpus", required=True, help="pool the base was drawn from")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--kind", required=True, choices=("l", "r"))
    p.add_argument("--complement-size", type=int, default=32)
    p.add_argument("--seed", type=int, help="default: the base set's seed")
    p.add_argument("--labels", default=",".join(DEFAULT_LABELS))
    p.add_argument("--language", action="append")
    p.add_argument("-o", "--output", help="output JSONL path (default: stdout)")
    p.set_defaults(func=_cmd_complement)

    p = sub.add_parser(
        "distribution", parents=[common], help="distinct slur/target terms per shot set"
    )
    p.add_argument("shots", nargs="+", help="shot set JSONL files")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--corpus", help="optional corpus to resolve example languages")
    p.add_argument("--labels", default=",".join(DEFAULT_LABELS))
    p.add_argument("--label", action="append", help="row label per shots file (repeatable)")
    p.add_argument("--language", action="append")
    p.add_argument("-o", "--output", help="write report as JSON")
    p.set_defaults(func=_cmd_distribution)

    p = sub.add_parser(
        "annotate-words", parents=[common], help="resolve a word list against a country's lexicon"
    )
    p.add_argument("--lexicon", required=True)
    p.add_argument("--country", required=True)
    p.add_argument("--words", required=True, help="plain text, one word per line")
    p.add_argument("-o", "--output", help="write annotation as JSON")
    p.set_defaults(func=_cmd_annotate_words)

    p = sub.add_parser(
        "rep-shift", parents=[common], help="representation shift between two embedding tables"
    )
    p.add_argument("--before", required=True)
    p.add_argument("--after", required=True)
    p.add_argument("--groups", help="JSON file: group name -> term list")
    p.add_argument("--lexicon", help="build Slurs/Targets groups from a lexicon")
    p.add_argument("--country", help="country for --lexicon group building")
    p.add_argument("--stopwords", help="bundled stopword language for a Stop group")
    p.add_argument("--random-pool", help="candidate word file for a size-matched Random group")
    p.add_argument("--seed", type=int, help="seed for the Random group draw")
    p.add_argument("--metric", choices=interp.SHIFT_METRICS, default="cosine")
    p.add_argument("--jobs", type=int, default=1, help="accepted for symmetry; output is order-stable")
    p.add_argument("-o", "--output", help="write report as JSON")
    p.set_defaults(func=_cmd_rep_shift)

    p = sub.add_parser("eval", parents=[common], help="macro P/R/F1 over prediction files")
    p.add_argument("--labels", required=True, help="declared label set, e.g. HOF,NOT")
    p.add_argument("--pred", action="append", required=True, help="predictions TSV (repeatable)")
    p.add_argument("--std", choices=("sample", "population"), default="sample")
    p.add_argument("-o", "--output", help="write metrics as JSON")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("eval-shots", parents=[common], help="score predictions on a shot set")
    p.add_argument("--shots", required=True, help="shot set JSONL")
    p.add_argument("--pred", required=True, help="predictions TSV")
    p.add_argument("--labels", default=",".join(DEFAULT_LABELS))
    p.add_argument("-o", "--output", help="write metrics as JSON")
    p.set_defaults(func=_cmd_eval_shots)

    return parser


def _config_args(command_argv: list[str]) -> list[str]:
    """Expand a ``--config FILE`` into leading flag tokens (flags given on the
    command line override them by coming later)."""
    if "--config" not in command_argv:
        return []
    at = command_argv.index("--config")
    if at + 1 >= len(command_argv):
        raise _CliDataError("--config needs a file argument")
    path = command_argv[at + 1]
    injected: list[str] = []
    explicit = {tok.split("=", 1)[0] for tok in command_argv if tok.startswith("--")}
    for lineno, raw in enumerate(_read_text(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise _CliDataError(f"{path}: line {lineno}: expected key=value")
        flag = "--" + key.strip().replace("_", "-")
        if flag in explicit or flag == "--config":
            continue
        value = value.strip()
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                injected.append(flag)
        else:
            injected.extend([flag, value])
    return injected


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        if argv and not argv[0].startswith("-"):
            argv = [argv[0]] + _config_args(argv[1:]) + argv[1:]
        args = parser.parse_args(argv)
        return args.func(args)
    except _CliDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
