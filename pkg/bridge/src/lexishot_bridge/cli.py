"""Bridge CLI: ``extract`` writes an embedding table for a term list,
``train`` runs the few-shot harness over a shot set and writes predictions.

Exit codes: 0 success, 1 data/model error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .extract import DEFAULT_LAYER, ExtractionSpec, extract_embeddings
from .formats import read_terms
from .train import TrainSpec, train_and_predict


def _cmd_extract(args: argparse.Namespace) -> int:
    terms = read_terms(Path(args.terms).read_text(encoding="utf-8"))
    spec = ExtractionSpec(
        model_id=args.model,
        terms=tuple(terms),
        output_path=Path(args.output),
        layer_index=args.layer,
    )
    path = extract_embeddings(spec)
    print(f"wrote {len(terms)} vectors to {path}")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    spec = TrainSpec(
        shot_path=Path(args.shots),
        model_id=args.model,
        eval_corpus_path=Path(args.eval_corpus),
        output_path=Path(args.output),
        seed=args.seed,
        epochs=args.epochs,
        pairs_per_example=args.pairs,
        lr=args.lr,
        batch_size=args.batch_size,
    )
    path = train_and_predict(spec)
    print(f"wrote predictions to {path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexishot-bridge",
        description="Model-side companion: embedding extraction and few-shot training.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="write a layer-wise embedding table for a term list")
    p.add_argument("--model", required=True, help="model id or local model directory")
    p.add_argument("--terms", required=True, help="lexicon TSV or plain word list")
    p.add_argument("--layer", type=int, default=DEFAULT_LAYER)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("train", help="few-shot train on a shot set and predict a corpus")
    p.add_argument("--shots", required=True, help="shot set JSONL")
    p.add_argument("--model", required=True, help="sentence encoder id or directory")
    p.add_argument("--eval-corpus", required=True, help="corpus TSV to predict")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--pairs", type=int, default=4)
    p.add_argument("--lr", type=float, default=2e-5)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("-o", "--output", required=True, help="predictions TSV path")
    p.set_defaults(func=_cmd_train)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
