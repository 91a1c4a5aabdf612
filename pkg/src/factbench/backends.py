"""File-based classifier-backend protocol.

A backend is any executable invoked as ``<command> --manifest <path>`` that
exits 0 on success. The manifest is a JSON file naming the job's mode
(``train`` or ``predict``), its input data files (corpus interchange JSONL),
an output path, and an opaque config blob. Train/validation files carry gold
meta labels; predict files never do, so a backend cannot see test-fold gold
labels. Predictions come back as JSONL rows ``{doc_id, sent_index, predicted,
score}`` covering every requested sentence exactly once.
"""

from __future__ import annotations

import json
import subprocess
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .corpus import MetaLabel, SentenceRecord

PROTOCOL_VERSION = 1
MODE_TRAIN = "train"
MODE_PREDICT = "predict"
MANIFEST_NAME = "manifest.json"


class ProtocolError(ValueError):
    """A backend produced output that violates the protocol."""


class BackendError(RuntimeError):
    """A backend process failed (nonzero exit, timeout, missing output)."""


@dataclass(frozen=True)
class JobManifest:
    job_id: str
    mode: str
    output_path: str
    train_path: str | None = None
    validation_path: str | None = None
    predict_path: str | None = None
    config: dict = field(default_factory=dict)
    protocol_version: int = PROTOCOL_VERSION

    def data_paths(self) -> list[str]:
        if self.mode == MODE_TRAIN:
            return [p for p in (self.train_path, self.validation_path) if p]
        return [p for p in (self.predict_path,) if p]


@dataclass(frozen=True)
class BackendRegistration:
    backend_id: str
    command: tuple[str, ...]
    timeout: float = 600.0
    env: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Prediction:
    doc_id: str
    sent_index: int
    predicted: MetaLabel
    score: float = 0.0

    @property
    def key(self) -> tuple[str, int]:
        return (self.doc_id, self.sent_index)


def _record_row(rec: SentenceRecord, include_meta: bool) -> str:
    obj = {
        "dataset": rec.dataset_id,
        "doc_id": rec.doc_id,
        "sent_index": rec.sent_index,
        "text": rec.text,
        "source_label": rec.source_label,
    }
    if include_meta:
        obj["meta_label"] = None if rec.meta_label is None else rec.meta_label.value
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_job_data(records: Sequence[SentenceRecord], path: Path, include_meta: bool) -> None:
    ordered = sorted(records, key=lambda r: r.key)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in ordered:
            fh.write(_record_row(rec, include_meta) + "\n")


def read_job_data(path: str | Path) -> list[SentenceRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                meta = obj.get("meta_label")
                records.append(
                    SentenceRecord(
                        dataset_id=obj["dataset"],
                        doc_id=obj["doc_id"],
                        sent_index=int(obj["sent_index"]),
                        text=obj["text"],
                        source_label=obj.get("source_label", ""),
                        meta_label=None if meta is None else MetaLabel(meta),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise ProtocolError(f"{path}:{lineno}: bad data row: {exc}") from exc
    return records


def assert_unlabeled(path: str | Path) -> None:
    """Schema check: a predict-mode data file must not carry meta labels."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if line and "meta_label" in json.loads(line):
                raise ProtocolError(f"{path}:{lineno}: predict data must not carry meta_label")


def write_job_manifest(
    job_id: str,
    mode: str,
    job_dir: str | Path,
    *,
    train: Sequence[SentenceRecord] | None = None,
    validation: Sequence[SentenceRecord] | None = None,
    predict: Sequence[SentenceRecord] | None = None,
    config: dict | None = None,
    output_name: str | None = None,
) -> Path:
    """Write a job's data files and manifest into job_dir; returns the manifest path."""
    job_dir = Path(job_dir)
    job_dir.mkdir(parents=True, exist_ok=True)
    if mode not in (MODE_TRAIN, MODE_PREDICT):
        raise ProtocolError(f"unknown job mode {mode!r}")
    # train output may be a file or a directory, at the backend's discretion
    default_output = "model" if mode == MODE_TRAIN else "predictions.jsonl"
    manifest = JobManifest(
        job_id=job_id,
        mode=mode,
        output_path=str(job_dir / (output_name or default_output)),
        config=dict(config or {}),
    )
    if mode == MODE_TRAIN:
        if not train or not validation:
            raise ProtocolError("train jobs need train and validation records")
        train_path = job_dir / "train.jsonl"
        val_path = job_dir / "validation.jsonl"
        write_job_data(train, train_path, include_meta=True)
        write_job_data(validation, val_path, include_meta=True)
        manifest = replace(manifest, train_path=str(train_path), validation_path=str(val_path))
    else:
        if not predict:
            raise ProtocolError("predict jobs need records to predict")
        predict_path = job_dir / "predict.jsonl"
        write_job_data(predict, predict_path, include_meta=False)
        assert_unlabeled(predict_path)
        manifest = replace(manifest, predict_path=str(predict_path))

    manifest_path = job_dir / MANIFEST_NAME
    payload = {
        "job_id": manifest.job_id,
        "mode": manifest.mode,
        "protocol_version": manifest.protocol_version,
        "train_path": manifest.train_path,
        "validation_path": manifest.validation_path,
        "predict_path": manifest.predict_path,
        "output_path": manifest.output_path,
        "config": manifest.config,
    }
    manifest_path.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
    return manifest_path


def read_job_manifest(path: str | Path) -> JobManifest:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"cannot read manifest {path}: {exc}") from exc
    try:
        manifest = JobManifest(
            job_id=obj["job_id"],
            mode=obj["mode"],
            output_path=obj["output_path"],
            train_path=obj.get("train_path"),
            validation_path=obj.get("validation_path"),
            predict_path=obj.get("predict_path"),
            config=obj.get("config") or {},
            protocol_version=int(obj["protocol_version"]),
        )
    except KeyError as exc:
        raise ProtocolError(f"manifest {path} is missing key {exc}") from exc
    if manifest.mode not in (MODE_TRAIN, MODE_PREDICT):
        raise ProtocolError(f"manifest {path}: unknown mode {manifest.mode!r}")
    return manifest


def invoke_backend(
    reg: BackendRegistration, manifest_path: str | Path, stdio_dir: str | Path | None = None
) -> Path:
    """Run the backend on a manifest; returns its output path on success.

    All referenced input files must exist before launch. stdout/stderr are
    captured next to the manifest (or into stdio_dir) for the run registry.
    """
    manifest = read_job_manifest(manifest_path)
    for data_path in manifest.data_paths():
        if not Path(data_path).exists():
            raise BackendError(f"{reg.backend_id}: input file missing before launch: {data_path}")
    cmd = list(reg.command) + ["--manifest", str(manifest_path)]
    env = None
    if reg.env:
        import os
        env = {**os.environ, **reg.env}
    try:
        proc = subprocess.run(
            cmd, capture_output=True, text=True, timeout=reg.timeout, env=env, check=False
        )
    except subprocess.TimeoutExpired as exc:
        raise BackendError(f"{reg.backend_id}: timed out after {reg.timeout}s") from exc
    out_dir = Path(stdio_dir) if stdio_dir is not None else Path(manifest_path).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "stdout.txt").write_text(proc.stdout, encoding="utf-8")
    (out_dir / "stderr.txt").write_text(proc.stderr, encoding="utf-8")
    if proc.returncode != 0:
        tail = proc.stderr.strip().splitlines()[-5:]
        raise BackendError(
            f"{reg.backend_id}: exit code {proc.returncode}: " + " | ".join(tail)
        )
    output = Path(manifest.output_path)
    if not output.exists():
        raise BackendError(f"{reg.backend_id}: exited 0 but produced no {output}")
    return output


def write_predictions(predictions: Sequence[Prediction], path: str | Path) -> None:
    ordered = sorted(predictions, key=lambda p: p.key)
    with open(path, "w", encoding="utf-8") as fh:
        for pred in ordered:
            obj = {
                "doc_id": pred.doc_id,
                "sent_index": pred.sent_index,
                "predicted": pred.predicted.value,
                "score": pred.score,
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


def parse_predictions(
    path: str | Path, expected: set[tuple[str, int]] | None = None
) -> list[Prediction]:
    """Parse and validate a prediction file.

    With `expected`, coverage must be exact: no unknown, duplicate, or missing
    sentences. Scores are optional and default to 0.0.
    """
    predictions: list[Prediction] = []
    seen: set[tuple[str, int]] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                pred = Prediction(
                    doc_id=obj["doc_id"],
                    sent_index=int(obj["sent_index"]),
                    predicted=MetaLabel(obj["predicted"]),
                    score=float(obj.get("score", 0.0)),
                )
            except (KeyError, ValueError) as exc:
                raise ProtocolError(f"{path}:{lineno}: bad prediction row: {exc}") from exc
            if pred.key in seen:
                raise ProtocolError(f"{path}:{lineno}: duplicate prediction for {pred.key}")
            if expected is not None and pred.key not in expected:
                raise ProtocolError(f"{path}:{lineno}: prediction for unknown sentence {pred.key}")
            seen.add(pred.key)
            predictions.append(pred)
    if expected is not None and seen != expected:
        missing = sorted(expected - seen)
        raise ProtocolError(f"{path}: missing predictions for {missing[:5]}" +
                            (f" and {len(missing) - 5} more" if len(missing) > 5 else ""))
    return predictions


def svm_backend_registration(backend_id: str = "svm-proc", timeout: float = 1800.0) -> BackendRegistration:
    """The bundled SVM baseline, wrapped as an external process."""
    return BackendRegistration(
        backend_id=backend_id,
        command=(sys.executable, "-m", "factbench.workers.svm_worker"),
        timeout=timeout,
    )


def stub_backend_registration(backend_id: str = "stub", timeout: float = 300.0) -> BackendRegistration:
    """The bundled majority-class stub backend."""
    return BackendRegistration(
        backend_id=backend_id,
        command=(sys.executable, "-m", "factbench.workers.stub_worker"),
        timeout=timeout,
    )
