"""Predict with a selected checkpoint; sequences truncate at the configured length."""

from __future__ import annotations

from pathlib import Path

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .config import FineTuneConfig
from .protocol import Manifest, ProtocolError, read_rows, write_predictions
from .training import SELECTED_POINTER


def resolve_checkpoint(model_path: str | Path) -> Path:
    """Accept either a training output directory (follow its pointer) or a checkpoint."""
    path = Path(model_path)
    if not path.exists():
        raise ProtocolError(f"model path does not exist: {path}")
    pointer = path / SELECTED_POINTER
    if pointer.exists():
        checkpoint = path / pointer.read_text(encoding="utf-8").strip()
        if not checkpoint.exists():
            raise ProtocolError(f"selected checkpoint missing: {checkpoint}")
        return checkpoint
    return path


def predict_sentences(manifest: Manifest) -> Path:
    config = FineTuneConfig.from_blob(manifest.config)
    model_path = manifest.config.get("model_path")
    if not model_path:
        raise ProtocolError("predict manifest config must carry model_path")
    if not manifest.predict_path:
        raise ProtocolError("predict manifest must name predict_path")
    checkpoint = resolve_checkpoint(model_path)
    tokenizer = AutoTokenizer.from_pretrained(checkpoint)
    model = AutoModelForSequenceClassification.from_pretrained(checkpoint)
    model.eval()

    rows = read_rows(manifest.predict_path, labeled=False)
    scores: list[float] = []
    with torch.no_grad():
        for start in range(0, len(rows), config.batch_size):
            chunk = rows[start : start + config.batch_size]
            encoded = tokenizer(
                [row.text for row in chunk],
                truncation=True,
                max_length=config.max_sequence_length,
                padding=True,
                return_tensors="pt",
            )
            probs = torch.softmax(model(**encoded).logits, dim=-1)
            scores.extend(probs[:, 1].tolist())
    output = Path(manifest.output_path)
    output.parent.mkdir(parents=True, exist_ok=True)
    write_predictions(rows, scores, output)
    return output
