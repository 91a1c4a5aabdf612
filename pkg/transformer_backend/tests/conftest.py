from __future__ import annotations

import json
import random
from pathlib import Path

import pytest
import torch
from transformers import BertConfig, BertForSequenceClassification, BertTokenizer

SIGNAL = [f"sig{i:02d}" for i in range(8)]
NOISE = [f"fil{i:03d}" for i in range(30)]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory) -> Path:
    """A miniature encoder saved locally so tests never touch the network."""
    root = tmp_path_factory.mktemp("tiny-encoder")
    vocab = root / "vocab.txt"
    specials = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    vocab.write_text("\n".join(specials + SIGNAL + NOISE) + "\n", encoding="utf-8")
    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(specials) + len(SIGNAL) + len(NOISE),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
        num_labels=2,
    )
    model_dir = root / "model"
    BertForSequenceClassification(config).save_pretrained(model_dir)
    BertTokenizer(str(vocab)).save_pretrained(model_dir)
    return model_dir


def synthetic_rows(n: int, seed: str, facts_every=(0, 1)) -> list[dict]:
    """Labeled sentence rows; Facts sentences carry signal tokens."""
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        facts = (i % 5) in facts_every
        length = rng.randint(5, 12)
        tokens = [rng.choice(NOISE) for _ in range(length)]
        if facts:
            for pos in rng.sample(range(length), max(2, length // 3)):
                tokens[pos] = rng.choice(SIGNAL)
        rows.append({
            "dataset": "synth",
            "doc_id": f"doc{i // 5:03d}",
            "sent_index": i % 5,
            "text": " ".join(tokens),
            "source_label": "Facts" if facts else "NonFacts",
            "meta_label": "Facts" if facts else "NonFacts",
        })
    return rows


def write_rows(rows: list[dict], path: Path, labeled: bool = True) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            if not labeled:
                row = {k: v for k, v in row.items() if k != "meta_label"}
            fh.write(json.dumps(row) + "\n")
    return path


def write_manifest(path: Path, mode: str, output_path: Path, config: dict,
                   train: Path | None = None, validation: Path | None = None,
                   predict: Path | None = None) -> Path:
    payload = {
        "job_id": f"test-{mode}",
        "mode": mode,
        "protocol_version": 1,
        "train_path": str(train) if train else None,
        "validation_path": str(validation) if validation else None,
        "predict_path": str(predict) if predict else None,
        "output_path": str(output_path),
        "config": config,
    }
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return path


@pytest.fixture
def smoke_config(tiny_model_dir) -> dict:
    return {
        "base_model": str(tiny_model_dir),
        "epochs": 2,
        "batch_size": 8,
        "max_sequence_length": 32,
        "learning_rate": 5e-3,
        "seed": 42,
    }


@pytest.fixture
def train_job(tmp_path, smoke_config):
    train = write_rows(synthetic_rows(50, "train"), tmp_path / "train.jsonl")
    validation = write_rows(synthetic_rows(20, "val"), tmp_path / "validation.jsonl")
    out = tmp_path / "model-out"
    return write_manifest(
        tmp_path / "train-manifest.json", "train", out, smoke_config,
        train=train, validation=validation,
    )
