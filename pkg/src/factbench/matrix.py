"""Transfer-matrix runner: every training pool crossed with every target.

For each backend and each non-empty subset of the datasets (the pool), a
model is trained on the concatenated train folds of the pool members, selected
on their concatenated validation folds, and evaluated on the test fold of
every dataset. Each cell persists its predictions, so a run directory is a
complete audit trail: config snapshot, split manifest, per-cell job files,
metrics, and rendered reports. Failed cells are recorded and the run
continues.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from itertools import combinations
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .backends import (
    BackendError,
    BackendRegistration,
    Prediction,
    ProtocolError,
    invoke_backend,
    parse_predictions,
    stub_backend_registration,
    svm_backend_registration,
    write_job_manifest,
)
from .corpus import Corpus, SentenceRecord
from .metrics import Metrics, confusion, prf1
from .splits import Fold, SplitAssignment, materialize_fold
from .svm import SvmHyperparams, default_grid, grid_search, predict_text, save_model

log = logging.getLogger(__name__)


class PoolError(ValueError):
    pass


@dataclass(frozen=True)
class Pool:
    datasets: tuple[str, ...]

    @property
    def name(self) -> str:
        return "+".join(self.datasets)

    def __str__(self) -> str:
        return self.name


def enumerate_pools(datasets: Iterable[str]) -> list[Pool]:
    """All non-empty subsets in canonical order: by size, then lexicographic."""
    ordered = sorted(set(datasets))
    if not ordered:
        raise PoolError("no datasets to pool")
    pools = []
    for size in range(1, len(ordered) + 1):
        for subset in combinations(ordered, size):
            pools.append(Pool(datasets=subset))
    return pools


class MatrixBackend(Protocol):
    backend_id: str

    def train(self, train: list[SentenceRecord], validation: list[SentenceRecord],
              job_dir: Path) -> object: ...

    def predict(self, handle: object, records: list[SentenceRecord],
                job_dir: Path) -> list[Prediction]: ...


@dataclass
class InProcessSvmBackend:
    """The SVM baseline run inside the harness process."""

    backend_id: str = "svm"
    grid: Sequence[SvmHyperparams] | None = None
    ngram_range: tuple[int, int] = (1, 3)
    min_df: int = 1

    def train(self, train, validation, job_dir: Path):
        result = grid_search(
            train,
            validation,
            list(self.grid) if self.grid is not None else default_grid(),
            ngram_range=self.ngram_range,
            min_df=self.min_df,
        )
        job_dir.mkdir(parents=True, exist_ok=True)
        save_model(result.model, job_dir / "model.json")
        (job_dir / "selection.json").write_text(
            json.dumps({"c": result.chosen.c, "class_weight": result.chosen.class_weight,
                        "max_iterations": result.chosen.max_iterations,
                        "validation_f1": result.val_f1}),
            encoding="utf-8",
        )
        return result.model

    def predict(self, handle, records, job_dir: Path) -> list[Prediction]:
        out = []
        for rec in records:
            label, margin = predict_text(handle, rec.text)
            out.append(Prediction(rec.doc_id, rec.sent_index, label, margin))
        return out


@dataclass
class SubprocessBackend:
    """Any external backend speaking the manifest/prediction file protocol."""

    registration: BackendRegistration
    config: dict = field(default_factory=dict)

    @property
    def backend_id(self) -> str:
        return self.registration.backend_id

    def train(self, train, validation, job_dir: Path):
        manifest = write_job_manifest(
            job_id=f"{self.backend_id}-train",
            mode="train",
            job_dir=job_dir,
            train=train,
            validation=validation,
            config=self.config,
        )
        return invoke_backend(self.registration, manifest)

    def predict(self, handle, records, job_dir: Path) -> list[Prediction]:
        manifest = write_job_manifest(
            job_id=f"{self.backend_id}-predict",
            mode="predict",
            job_dir=job_dir,
            predict=records,
            config={**self.config, "model_path": str(handle)},
        )
        output = invoke_backend(self.registration, manifest)
        expected = {(rec.doc_id, rec.sent_index) for rec in records}
        return parse_predictions(output, expected=expected)


@dataclass
class CellResult:
    backend_id: str
    pool: str
    target: str
    metrics: Metrics | None = None
    n_sentences: int = 0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.metrics is not None


@dataclass
class TransferMatrix:
    backends: list[str]
    pools: list[str]
    targets: list[str]
    cells: dict[tuple[str, str, str], CellResult]
    metadata: dict = field(default_factory=dict)

    @property
    def n_failures(self) -> int:
        return sum(not cell.ok for cell in self.cells.values())

    def cell(self, backend_id: str, pool: str, target: str) -> CellResult:
        return self.cells[(backend_id, pool, target)]


def _pool_fold(corpora: dict[str, Corpus], assignment: SplitAssignment,
               pool: Pool, fold: Fold) -> list[SentenceRecord]:
    records: list[SentenceRecord] = []
    for dataset in pool.datasets:  # canonical order == sorted order
        records.extend(materialize_fold(corpora[dataset], assignment, fold))
    records.sort(key=lambda r: r.key)
    return records


def _write_cell_predictions(path: Path, records: list[SentenceRecord],
                            predictions: list[Prediction]) -> None:
    by_key = {p.key: p for p in predictions}
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            pred = by_key[(rec.doc_id, rec.sent_index)]
            obj = {
                "dataset": rec.dataset_id,
                "doc_id": rec.doc_id,
                "sent_index": rec.sent_index,
                "gold": rec.meta_label.value if rec.meta_label else None,
                "predicted": pred.predicted.value,
                "score": pred.score,
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


def _run_pool_jobs(
    backend: MatrixBackend,
    pool: Pool,
    corpora: dict[str, Corpus],
    assignment: SplitAssignment,
    targets: list[str],
    run_dir: Path,
) -> list[CellResult]:
    cell_root = run_dir / "cells" / backend.backend_id / pool.name
    results = []
    try:
        train = _pool_fold(corpora, assignment, pool, Fold.TRAIN)
        validation = _pool_fold(corpora, assignment, pool, Fold.VALIDATION)
        handle = backend.train(train, validation, cell_root / "train")
    except (BackendError, ProtocolError, ValueError) as exc:
        log.error("backend %s pool %s: training failed: %s", backend.backend_id, pool.name, exc)
        return [
            CellResult(backend.backend_id, pool.name, target, error=f"training failed: {exc}")
            for target in targets
        ]
    for target in targets:
        try:
            test = materialize_fold(corpora[target], assignment, Fold.TEST)
            predictions = backend.predict(handle, test, cell_root / target)
            by_key = {p.key: p for p in predictions}
            pred_labels = [by_key[(rec.doc_id, rec.sent_index)].predicted for rec in test]
            gold = [rec.meta_label for rec in test]
            metrics = prf1(confusion(pred_labels, gold))
            (cell_root / target).mkdir(parents=True, exist_ok=True)
            _write_cell_predictions(cell_root / target / "cell_predictions.jsonl", test, predictions)
            results.append(
                CellResult(backend.backend_id, pool.name, target,
                           metrics=metrics, n_sentences=len(test))
            )
        except (BackendError, ProtocolError, ValueError, KeyError) as exc:
            log.error("backend %s pool %s target %s failed: %s",
                      backend.backend_id, pool.name, target, exc)
            results.append(
                CellResult(backend.backend_id, pool.name, target, error=str(exc))
            )
    return results


def run_transfer_matrix(
    corpora: Sequence[Corpus],
    assignment: SplitAssignment,
    backends: Sequence[MatrixBackend],
    run_dir: str | Path,
    parallelism: int = 1,
    metadata: dict | None = None,
) -> TransferMatrix:
    """Run backends x pools x targets; corpora must be recast and covered by the split."""
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    by_dataset = {corpus.dataset_id: corpus for corpus in corpora}
    if len(by_dataset) != len(corpora):
        raise PoolError("duplicate dataset ids among corpora")
    targets = sorted(by_dataset)
    pools = enumerate_pools(targets)
    ids = [backend.backend_id for backend in backends]
    if len(set(ids)) != len(ids):
        raise PoolError(f"duplicate backend ids: {ids}")

    jobs = [(backend, pool) for backend in backends for pool in pools]
    cells: dict[tuple[str, str, str], CellResult] = {}

    def run_job(job):
        backend, pool = job
        return _run_pool_jobs(backend, pool, by_dataset, assignment, targets, run_dir)

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool_exec:
            all_results = list(pool_exec.map(run_job, jobs))
    else:
        all_results = [run_job(job) for job in jobs]
    for results in all_results:
        for cell in results:
            cells[(cell.backend_id, cell.pool, cell.target)] = cell

    matrix = TransferMatrix(
        backends=ids,
        pools=[pool.name for pool in pools],
        targets=targets,
        cells=cells,
        metadata={
            "finished_at": datetime.now(timezone.utc).isoformat(),
            **(metadata or {}),
        },
    )
    write_matrix(matrix, run_dir / "metrics.json")
    (run_dir / "report.txt").write_text(render_report(matrix, "table-text"), encoding="utf-8")
    (run_dir / "report.csv").write_text(render_report(matrix, "csv"), encoding="utf-8")
    if matrix.n_failures:
        log.warning("%d of %d cells failed", matrix.n_failures, len(cells))
    return matrix


# --- persistence and rendering ----------------------------------------------

def write_matrix(matrix: TransferMatrix, path: str | Path) -> None:
    rows = []
    for key in sorted(matrix.cells):
        cell = matrix.cells[key]
        rows.append({
            "backend": cell.backend_id,
            "pool": cell.pool,
            "target": cell.target,
            "precision": cell.metrics.precision if cell.metrics else None,
            "recall": cell.metrics.recall if cell.metrics else None,
            "f1": cell.metrics.f1 if cell.metrics else None,
            "n_sentences": cell.n_sentences,
            "error": cell.error,
        })
    payload = {
        "backends": matrix.backends,
        "pools": matrix.pools,
        "targets": matrix.targets,
        "cells": rows,
        "metadata": matrix.metadata,
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")


def read_matrix(path: str | Path) -> TransferMatrix:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    cells = {}
    for row in payload["cells"]:
        metrics = None
        if row["f1"] is not None:
            metrics = Metrics(precision=row["precision"], recall=row["recall"], f1=row["f1"])
        cell = CellResult(
            backend_id=row["backend"], pool=row["pool"], target=row["target"],
            metrics=metrics, n_sentences=row.get("n_sentences", 0), error=row.get("error"),
        )
        cells[(cell.backend_id, cell.pool, cell.target)] = cell
    return TransferMatrix(
        backends=payload["backends"],
        pools=payload["pools"],
        targets=payload["targets"],
        cells=cells,
        metadata=payload.get("metadata", {}),
    )


def format_f1(value: float) -> str:
    """Two decimals, table style: leading zero stripped (.92, 1.00)."""
    text = f"{value:.2f}"
    return text[1:] if text.startswith("0.") else text


def render_report(matrix: TransferMatrix, format: str = "table-text") -> str:
    if format == "csv":
        lines = ["pool,backend,target,precision,recall,f1"]
        for pool in matrix.pools:
            for backend in matrix.backends:
                for target in matrix.targets:
                    cell = matrix.cells[(backend, pool, target)]
                    if cell.ok:
                        m = cell.metrics
                        lines.append(f"{pool},{backend},{target},{m.precision},{m.recall},{m.f1}")
                    else:
                        lines.append(f"{pool},{backend},{target},,,")
        return "\n".join(lines) + "\n"
    if format != "table-text":
        raise ValueError(f"unknown report format {format!r}")

    groups = matrix.targets + ["Avg"]
    width = max(
        6,
        max(len(b) for b in matrix.backends) + 2,
        -(-max(len(g) + 2 for g in groups) // len(matrix.backends)),
    )
    group_width = width * len(matrix.backends)
    pool_width = max(12, max(len(p) for p in matrix.pools) + 2)
    header1 = " " * pool_width + "".join(f"{g:>{group_width}}" for g in groups)
    header2 = f"{'pool':<{pool_width}}" + "".join(
        f"{b:>{width}}" for _ in groups for b in matrix.backends
    )
    lines = [header1, header2, "-" * len(header2)]
    for pool in matrix.pools:
        cells_text = []
        for target in matrix.targets:
            for backend in matrix.backends:
                cell = matrix.cells[(backend, pool, target)]
                cells_text.append(format_f1(cell.metrics.f1) if cell.ok else "FAIL")
        for backend in matrix.backends:
            scores = [
                matrix.cells[(backend, pool, target)].metrics.f1
                for target in matrix.targets
                if matrix.cells[(backend, pool, target)].ok
            ]
            if len(scores) == len(matrix.targets):
                cells_text.append(format_f1(sum(scores) / len(scores)))
            else:
                cells_text.append("FAIL")
        lines.append(f"{pool:<{pool_width}}" + "".join(f"{c:>{width}}" for c in cells_text))
    return "\n".join(lines) + "\n"


def build_backend(entry: dict, svm_defaults: dict | None = None) -> MatrixBackend:
    """Construct a backend from a run-config entry."""
    kind = entry.get("kind", "svm")
    backend_id = entry.get("backend_id", kind)
    svm_defaults = svm_defaults or {}
    if kind == "svm":
        grid_rows = entry.get("grid") or svm_defaults.get("grid")
        grid = None
        if grid_rows:
            grid = [
                SvmHyperparams(
                    c=float(r["c"]),
                    class_weight=r.get("class_weight", "uniform"),
                    max_iterations=int(r.get("max_iterations", 1000)),
                    tolerance=float(r.get("tolerance", 1e-4)),
                )
                for r in grid_rows
            ]
        return InProcessSvmBackend(
            backend_id=backend_id,
            grid=grid,
            ngram_range=tuple(entry.get("ngram_range") or svm_defaults.get("ngram_range", (1, 3))),
            min_df=int(entry.get("min_df") or svm_defaults.get("min_df", 1)),
        )
    if kind == "svm-subprocess":
        reg = svm_backend_registration(backend_id=backend_id,
                                       timeout=float(entry.get("timeout", 1800.0)))
        config = dict(entry.get("config") or {})
        for key in ("grid", "ngram_range", "min_df"):
            if key not in config and svm_defaults.get(key) is not None:
                config[key] = svm_defaults[key]
        return SubprocessBackend(registration=reg, config=config)
    if kind == "stub":
        return SubprocessBackend(
            registration=stub_backend_registration(backend_id=backend_id,
                                                   timeout=float(entry.get("timeout", 300.0))),
            config=dict(entry.get("config") or {}),
        )
    if kind == "subprocess":
        reg = BackendRegistration(
            backend_id=backend_id,
            command=tuple(entry["command"]),
            timeout=float(entry.get("timeout", 3600.0)),
            env=dict(entry.get("env") or {}),
        )
        return SubprocessBackend(registration=reg, config=dict(entry.get("config") or {}))
    raise PoolError(f"unknown backend kind {kind!r}")
