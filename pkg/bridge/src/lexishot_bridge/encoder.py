"""Transformer loading and pooling shared by extraction and training."""

from __future__ import annotations

import torch
from transformers import AutoModel, AutoTokenizer


def load_encoder(model_id: str):
    """Load a tokenizer/model pair; ``model_id`` may be a local directory."""
    try:
        tokenizer = AutoTokenizer.from_pretrained(model_id)
        model = AutoModel.from_pretrained(model_id)
    except (OSError, ValueError) as exc:
        raise ValueError(f"cannot load model {model_id!r}: {exc}") from exc
    return tokenizer, model


def mean_pool(last_hidden: torch.Tensor, attention_mask: torch.Tensor) -> torch.Tensor:
    """Attention-masked mean over the sequence dimension."""
    mask = attention_mask.unsqueeze(-1).to(last_hidden.dtype)
    summed = (last_hidden * mask).sum(dim=1)
    counts = mask.sum(dim=1).clamp(min=1.0)
    return summed / counts


def encode_sentences(
    model,
    tokenizer,
    texts: list[str],
    batch_size: int = 16,
    max_length: int = 128,
    train: bool = False,
) -> torch.Tensor:
    """Mean-pooled sentence embeddings; gradients flow when ``train``."""
    chunks = []
    for start in range(0, len(texts), batch_size):
        batch = texts[start : start + batch_size]
        enc = tokenizer(
            batch,
            padding=True,
            truncation=True,
            max_length=max_length,
            return_tensors="pt",
        )
        if train:
            out = model(input_ids=enc["input_ids"], attention_mask=enc["attention_mask"])
            chunks.append(mean_pool(out.last_hidden_state, enc["attention_mask"]))
        else:
            with torch.no_grad():
                out = model(
                    input_ids=enc["input_ids"], attention_mask=enc["attention_mask"]
                )
                chunks.append(mean_pool(out.last_hidden_state, enc["attention_mask"]))
    return torch.cat(chunks, dim=0)
