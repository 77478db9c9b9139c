from __future__ import annotations

import json
import os
from pathlib import Path

import pytest
import torch
from tokenizers import Tokenizer
from tokenizers.models import WordPiece
from tokenizers.normalizers import Lowercase
from tokenizers.pre_tokenizers import Whitespace
from tokenizers.processors import TemplateProcessing
from transformers import BertConfig, BertModel, PreTrainedTokenizerFast

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")

# Whole words and continuation pieces covering the fixture terms and corpora.
VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "schimpf", "##wort", "volks", "##gruppe", "gruppe", "wort", "##chen",
    "die", "ist", "ein", "und", "text", "nichts", "neutral", "hier",
    "मुसलमान", "दलित", "##ों", "समाज", "और", "में",
    "mullo", "peaceful", "wajinga", "luo",
    "##01", "##02", "##03", "a", "b", "c", "d", "e",
]


def build_tiny_encoder(target: Path) -> Path:
    """A small BERT-style encoder with a WordPiece tokenizer, built locally
    so the tests never touch the network."""
    vocab_map = {w: i for i, w in enumerate(VOCAB)}
    wp = Tokenizer(WordPiece(vocab_map, unk_token="[UNK]"))
    wp.normalizer = Lowercase()
    wp.pre_tokenizer = Whitespace()
    wp.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab_map["[CLS]"]), ("[SEP]", vocab_map["[SEP]"])],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=wp,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=8,
        num_attention_heads=4,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    torch.manual_seed(1234)
    model = BertModel(config)
    model.save_pretrained(target)
    tokenizer.save_pretrained(target)
    return target


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory) -> Path:
    return build_tiny_encoder(tmp_path_factory.mktemp("encoder") / "tiny")


@pytest.fixture(scope="session")
def shot_fixture(tmp_path_factory) -> Path:
    """A 32-shot set JSONL in the toolkit's format."""
    path = tmp_path_factory.mktemp("shots") / "shots32.jsonl"
    header = {"method": "Lexicon", "size": 32, "seed": 7, "complement": None}
    lines = [json.dumps(header)]
    hateful = ["schimpfwort gegen die gruppe", "ein schimpf und wort", "wajinga luo text"]
    neutral = ["neutral text hier", "die gruppe ist neutral", "wort und text"]
    for i in range(32):
        hate = i % 2 == 0
        text = (hateful if hate else neutral)[i % 3] + f" {'abcde'[i % 5]}"
        lines.append(
            json.dumps(
                {
                    "id": f"s{i:03d}",
                    "label": "HOF" if hate else "NOT",
                    "text": text,
                    "origin": "lexicon-selected" if hate else "random-fill",
                    "matched_terms": ["schimpfwort"] if hate else [],
                }
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def eval_corpus_fixture(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("corpus") / "eval.tsv"
    rows = []
    for i in range(40):
        hate = i % 3 == 0
        text = "schimpfwort gruppe text" if hate else "neutral wort hier"
        rows.append(f"m{i:03d}\t{'HOF' if hate else 'NOT'}\tde\t{text} {'abcde'[i % 5]}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path
