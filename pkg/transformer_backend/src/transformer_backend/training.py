"""Fine-tune a pretrained encoder for the binary sentence task.

One checkpoint is stored after every epoch; each is evaluated on the
validation file and the one with the highest F1 (earliest epoch on ties) is
marked selected. The training log records per-epoch loss, validation F1, and
the learning-rate schedule, so the selection is auditable after the fact.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

import torch
from torch.optim import Adam
from torch.optim.lr_scheduler import LambdaLR
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .config import FineTuneConfig
from .protocol import Manifest, ProtocolError, Row, read_rows

log = logging.getLogger(__name__)

SELECTED_POINTER = "selected"
TRAINING_LOG = "training_log.json"


def _encode(tokenizer, rows: list[Row], max_length: int):
    return tokenizer(
        [row.text for row in rows],
        truncation=True,
        max_length=max_length,
        padding=True,
        return_tensors="pt",
    )


def _binary_f1(preds: torch.Tensor, gold: torch.Tensor) -> float:
    tp = int(((preds == 1) & (gold == 1)).sum())
    fp = int(((preds == 1) & (gold == 0)).sum())
    fn = int(((preds == 0) & (gold == 1)).sum())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return 2 * precision * recall / (precision + recall) if precision + recall else 0.0


def _evaluate(model, encoded, gold: torch.Tensor, batch_size: int) -> float:
    model.eval()
    preds = []
    with torch.no_grad():
        for start in range(0, len(gold), batch_size):
            batch = {k: v[start : start + batch_size] for k, v in encoded.items()}
            logits = model(**batch).logits
            preds.append(logits.argmax(dim=-1))
    return _binary_f1(torch.cat(preds), gold)


def _lr_lambda(total_steps: int, warmup_steps: int):
    def fn(step: int) -> float:
        if step < warmup_steps:
            return (step + 1) / max(1, warmup_steps)
        remaining = max(1, total_steps - warmup_steps)
        return max(0.0, (total_steps - step) / remaining)

    return fn


def fine_tune(manifest: Manifest) -> Path:
    config = FineTuneConfig.from_blob(manifest.config)
    if not manifest.train_path or not manifest.validation_path:
        raise ProtocolError("train manifest must name train_path and validation_path")
    train_rows = read_rows(manifest.train_path, labeled=True)
    val_rows = read_rows(manifest.validation_path, labeled=True)
    train_labels = {row.label for row in train_rows}
    if len(train_labels) < 2:
        raise ProtocolError("training data contains a single class; cannot fine-tune")

    torch.manual_seed(config.seed)
    tokenizer = AutoTokenizer.from_pretrained(config.base_model)
    model = AutoModelForSequenceClassification.from_pretrained(
        config.base_model, num_labels=2
    )

    encoded_train = _encode(tokenizer, train_rows, config.max_sequence_length)
    encoded_val = _encode(tokenizer, val_rows, config.max_sequence_length)
    y_train = torch.tensor([row.label for row in train_rows])
    y_val = torch.tensor([row.label for row in val_rows])

    n = len(train_rows)
    steps_per_epoch = (n + config.batch_size - 1) // config.batch_size
    total_steps = steps_per_epoch * config.epochs
    optimizer = Adam(model.parameters(), lr=config.learning_rate)
    scheduler = None
    if not config.constant_lr:
        warmup = int(config.warmup_fraction * total_steps)
        scheduler = LambdaLR(optimizer, _lr_lambda(total_steps, warmup))

    out_dir = Path(manifest.output_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    generator = torch.Generator().manual_seed(config.seed)
    epoch_log = []
    for epoch in range(1, config.epochs + 1):
        model.train()
        order = torch.randperm(n, generator=generator)
        total_loss = 0.0
        for start in range(0, n, config.batch_size):
            index = order[start : start + config.batch_size]
            batch = {k: v[index] for k, v in encoded_train.items()}
            output = model(**batch, labels=y_train[index])
            optimizer.zero_grad()
            output.loss.backward()
            optimizer.step()
            if scheduler is not None:
                scheduler.step()
            total_loss += output.loss.item()
        mean_loss = total_loss / steps_per_epoch
        val_f1 = _evaluate(model, encoded_val, y_val, config.batch_size)
        checkpoint = f"checkpoint-epoch{epoch:02d}"
        model.save_pretrained(out_dir / checkpoint)
        tokenizer.save_pretrained(out_dir / checkpoint)
        epoch_log.append({
            "epoch": epoch,
            "train_loss": mean_loss,
            "validation_f1": val_f1,
            "checkpoint": checkpoint,
        })
        log.info("epoch %d: loss %.4f, validation F1 %.4f", epoch, mean_loss, val_f1)

    best = max(epoch_log, key=lambda e: (e["validation_f1"], -e["epoch"]))
    (out_dir / SELECTED_POINTER).write_text(best["checkpoint"] + "\n", encoding="utf-8")
    (out_dir / TRAINING_LOG).write_text(
        json.dumps(
            {
                "job_id": manifest.job_id,
                "config": config.__dict__,
                "lr_schedule": "constant" if config.constant_lr
                else f"linear warmup {config.warmup_fraction:.0%} then linear decay",
                "epochs": epoch_log,
                "selected_epoch": best["epoch"],
                "selected_checkpoint": best["checkpoint"],
            },
            indent=2,
        ),
        encoding="utf-8",
    )
    return out_dir
