"""The job-file protocol this backend conforms to.

Manifest: JSON with keys job_id, mode ("train" | "predict"), protocol_version,
train_path, validation_path, predict_path, output_path, config. Data files are
JSON Lines, one sentence per row with keys dataset, doc_id, sent_index, text,
source_label, and (train/validation only) meta_label in {"Facts", "NonFacts"}.
Predictions are JSON Lines rows {doc_id, sent_index, predicted, score}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

FACTS = "Facts"
NON_FACTS = "NonFacts"
SUPPORTED_PROTOCOL = 1


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class Manifest:
    job_id: str
    mode: str
    output_path: str
    train_path: str | None
    validation_path: str | None
    predict_path: str | None
    config: dict
    protocol_version: int


@dataclass(frozen=True)
class Row:
    doc_id: str
    sent_index: int
    text: str
    label: int | None  # 1 = Facts, 0 = NonFacts, None = unlabeled


def read_manifest(path: str | Path) -> Manifest:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"cannot read manifest {path}: {exc}") from exc
    manifest = Manifest(
        job_id=obj.get("job_id", "?"),
        mode=obj.get("mode", "?"),
        output_path=obj["output_path"],
        train_path=obj.get("train_path"),
        validation_path=obj.get("validation_path"),
        predict_path=obj.get("predict_path"),
        config=obj.get("config") or {},
        protocol_version=int(obj.get("protocol_version", 0)),
    )
    if manifest.protocol_version != SUPPORTED_PROTOCOL:
        raise ProtocolError(f"unsupported protocol_version {manifest.protocol_version}")
    if manifest.mode not in ("train", "predict"):
        raise ProtocolError(f"unknown mode {manifest.mode!r}")
    return manifest


def read_rows(path: str | Path, labeled: bool) -> list[Row]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            label = None
            if labeled:
                meta = obj.get("meta_label")
                if meta not in (FACTS, NON_FACTS):
                    raise ProtocolError(f"{path}:{lineno}: missing or bad meta_label {meta!r}")
                label = 1 if meta == FACTS else 0
            rows.append(
                Row(
                    doc_id=obj["doc_id"],
                    sent_index=int(obj["sent_index"]),
                    text=obj["text"],
                    label=label,
                )
            )
    if not rows:
        raise ProtocolError(f"{path}: no rows")
    return rows


def write_predictions(rows: list[Row], scores: list[float], path: str | Path) -> None:
    """One prediction per row; Facts iff the positive-class probability > 0.5."""
    if len(rows) != len(scores):
        raise ProtocolError("row/score length mismatch")
    with open(path, "w", encoding="utf-8") as fh:
        for row, score in zip(rows, scores):
            obj = {
                "doc_id": row.doc_id,
                "sent_index": row.sent_index,
                "predicted": FACTS if score > 0.5 else NON_FACTS,
                "score": float(score),
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
