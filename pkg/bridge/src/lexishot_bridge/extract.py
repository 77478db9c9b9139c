"""Layer-wise term embedding extraction.

For every term we run the encoder on the term string alone, take the hidden
state of the requested layer (index k = output of block k; these are the
post-block states, i.e. after the block's layer norm in BERT-style models),
keep the positions whose tokenizer offsets cover actual characters (special
tokens map to empty offsets and are dropped), and average them: a word that
spans several sub-tokens gets the mean of its sub-token vectors.

Extraction is deterministic: the model runs in eval mode under no_grad, so
two runs over the same model and terms write identical files.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import torch

from .encoder import load_encoder
from .formats import write_embedding_table

DEFAULT_LAYER = 8


@dataclass(frozen=True)
class ExtractionSpec:
    model_id: str
    terms: tuple[str, ...]
    output_path: Path
    layer_index: int = DEFAULT_LAYER
    pooling: str = "mean"
    extra_metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("no terms to extract")
        if self.layer_index < 0:
            raise ValueError(f"layer index must be >= 0, got {self.layer_index}")
        if self.pooling != "mean":
            raise ValueError(f"unsupported pooling {self.pooling!r} (only 'mean')")
        bad = [t for t in self.terms if not t.strip()]
        if bad:
            raise ValueError("term list contains empty terms")


def term_vector(model, tokenizer, term: str, layer_index: int) -> torch.Tensor:
    """The layer-``layer_index`` representation of ``term``: mean over the
    sub-token positions whose offsets cover characters of the term."""
    enc = tokenizer(term, return_offsets_mapping=True, return_tensors="pt")
    offsets = enc["offset_mapping"][0].tolist()
    positions = [i for i, (a, b) in enumerate(offsets) if b > a]
    if not positions:
        raise ValueError(f"term {term!r} tokenizes to zero content tokens")
    with torch.no_grad():
        out = model(
            input_ids=enc["input_ids"],
            attention_mask=enc["attention_mask"],
            output_hidden_states=True,
        )
    hidden = out.hidden_states
    if layer_index >= len(hidden):
        raise ValueError(
            f"layer index {layer_index} out of range: model has "
            f"{len(hidden) - 1} layers"
        )
    return hidden[layer_index][0, positions].mean(dim=0)


def extract_table(spec: ExtractionSpec) -> tuple[int, dict[str, list[float]], dict[str, str]]:
    """Run extraction and return (dimension, entries, metadata)."""
    tokenizer, model = load_encoder(spec.model_id)
    model.eval()
    entries: dict[str, list[float]] = {}
    for term in spec.terms:
        vec = term_vector(model, tokenizer, term, spec.layer_index)
        entries[term] = [float(x) for x in vec]
    dimension = len(next(iter(entries.values())))
    metadata = {
        "layer": str(spec.layer_index),
        "model": str(spec.model_id),
        "pooling": spec.pooling,
        "states": "post-block",
        **{str(k): str(v) for k, v in spec.extra_metadata.items()},
    }
    return dimension, entries, metadata


def extract_embeddings(spec: ExtractionSpec) -> Path:
    """Extract term vectors and write the embedding table file."""
    dimension, entries, metadata = extract_table(spec)
    spec.output_path.parent.mkdir(parents=True, exist_ok=True)
    spec.output_path.write_text(
        write_embedding_table(dimension, entries, metadata), encoding="utf-8", newline="\n"
    )
    return spec.output_path
