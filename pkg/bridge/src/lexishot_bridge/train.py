"""SetFit-style few-shot training and prediction.

The harness reads a shot set JSONL, finetunes a sentence encoder with a
Siamese contrastive objective, fits a logistic head, and writes a
predictions TSV over an evaluation corpus:

1. Pair generation: for each shot and each of ``pairs_per_example`` rounds,
   draw one same-class partner (target similarity 1) and one
   different-class partner (target similarity 0).
2. Encoder finetuning: minimize MSE between the cosine similarity of the
   pair's mean-pooled embeddings and the pair target, so same-class
   representations are pulled together and different-class ones pushed
   apart.
3. Head: a logistic layer trained on the frozen finetuned embeddings.
4. Prediction: every evaluation row is scored and written as
   ``id<TAB>gold<TAB>pred``.

Everything is seeded; a manifest JSON written next to the predictions
records the shot-set header, the seed, the hyperparameters and the
determinism caveat for the underlying framework.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import torch

from .encoder import encode_sentences, load_encoder
from .formats import read_corpus, read_shot_set, write_predictions


@dataclass(frozen=True)
class TrainSpec:
    shot_path: Path
    model_id: str
    eval_corpus_path: Path
    output_path: Path
    seed: int
    epochs: int = 1
    pairs_per_example: int = 4
    lr: float = 2e-5
    batch_size: int = 8
    max_length: int = 128
    head_epochs: int = 100
    head_lr: float = 0.05

    def __post_init__(self) -> None:
        if self.epochs < 1 or self.pairs_per_example < 1:
            raise ValueError("epochs and pairs_per_example must be >= 1")


def _generate_pairs(labels: list[str], rounds: int, rng: random.Random):
    """(anchor index, partner index, target similarity) triples."""
    by_label: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_label.setdefault(label, []).append(i)
    pairs: list[tuple[int, int, float]] = []
    for _ in range(rounds):
        for i, label in enumerate(labels):
            same = [j for j in by_label[label] if j != i]
            diff = [j for j, other in enumerate(labels) if other != label]
            if same:
                pairs.append((i, rng.choice(same), 1.0))
            if diff:
                pairs.append((i, rng.choice(diff), 0.0))
    rng.shuffle(pairs)
    return pairs


def train_and_predict(spec: TrainSpec) -> Path:
    """Run the full harness; returns the predictions path.

    Raises on a non-binary shot label set, an empty evaluation corpus, or
    evaluation labels outside the shot label set.
    """
    header, shots = read_shot_set(spec.shot_path.read_text(encoding="utf-8"))
    if not shots:
        raise ValueError("shot set has no examples")
    classes = sorted({s.label for s in shots})
    if len(classes) != 2:
        raise ValueError(f"shot label set must be binary, got {classes}")
    eval_rows = read_corpus(spec.eval_corpus_path.read_text(encoding="utf-8"))
    if not eval_rows:
        raise ValueError("evaluation corpus is empty")
    foreign = sorted({r.label for r in eval_rows} - set(classes))
    if foreign:
        raise ValueError(f"evaluation labels not in shot label set: {foreign}")

    rng = random.Random(spec.seed)
    torch.manual_seed(spec.seed)
    tokenizer, model = load_encoder(spec.model_id)

    texts = [s.text for s in shots]
    labels = [s.label for s in shots]
    pairs = _generate_pairs(labels, spec.pairs_per_example, rng)

    model.train()
    optimizer = torch.optim.AdamW(model.parameters(), lr=spec.lr)
    loss_fn = torch.nn.MSELoss()
    for _ in range(spec.epochs):
        for start in range(0, len(pairs), spec.batch_size):
            batch = pairs[start : start + spec.batch_size]
            left = encode_sentences(
                model, tokenizer, [texts[i] for i, _, _ in batch],
                batch_size=len(batch), max_length=spec.max_length, train=True,
            )
            right = encode_sentences(
                model, tokenizer, [texts[j] for _, j, _ in batch],
                batch_size=len(batch), max_length=spec.max_length, train=True,
            )
            target = torch.tensor([t for _, _, t in batch])
            sim = torch.nn.functional.cosine_similarity(left, right)
            loss = loss_fn(sim, target)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()

    model.eval()
    shot_emb = encode_sentences(
        model, tokenizer, texts, batch_size=spec.batch_size, max_length=spec.max_length
    )
    y = torch.tensor([float(classes.index(label)) for label in labels])
    head = torch.nn.Linear(shot_emb.shape[1], 1)
    head_opt = torch.optim.Adam(head.parameters(), lr=spec.head_lr)
    bce = torch.nn.BCEWithLogitsLoss()
    for _ in range(spec.head_epochs):
        logits = head(shot_emb).squeeze(-1)
        loss = bce(logits, y)
        head_opt.zero_grad()
        loss.backward()
        head_opt.step()

    eval_emb = encode_sentences(
        model,
        tokenizer,
        [r.text for r in eval_rows],
        batch_size=spec.batch_size,
        max_length=spec.max_length,
    )
    with torch.no_grad():
        logits = head(eval_emb).squeeze(-1)
    predicted = [classes[int(logit > 0)] for logit in logits]

    spec.output_path.parent.mkdir(parents=True, exist_ok=True)
    spec.output_path.write_text(
        write_predictions([(r.id, r.label, p) for r, p in zip(eval_rows, predicted)]),
        encoding="utf-8",
        newline="\n",
    )
    manifest = {
        "shot_header": header,
        "n_shots": len(shots),
        "labels": classes,
        "seed": spec.seed,
        "model": str(spec.model_id),
        "epochs": spec.epochs,
        "pairs_per_example": spec.pairs_per_example,
        "lr": spec.lr,
        "batch_size": spec.batch_size,
        "head_epochs": spec.head_epochs,
        "head_lr": spec.head_lr,
        "n_eval": len(eval_rows),
        "determinism": "seeded; bit-exact on CPU, framework kernels may vary on accelerators",
    }
    manifest_path = spec.output_path.with_suffix(spec.output_path.suffix + ".manifest.json")
    manifest_path.write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    return spec.output_path
