"""Linear SVM trained by dual coordinate descent, plus validation grid search.

Training minimizes

    0.5 ||w||^2 + C * sum_i cw(y_i) * max(0, 1 - y_i * w.x_i)

over vectors augmented with a constant bias feature (so the bias is weakly
regularized; the usual trade-off of the augmentation trick). The dual
box-constrained QP is solved coordinate-wise in a fixed cyclic order, which
makes training deterministic: same data and hyperparameters, bit-identical
weights. The dual objective is recorded per epoch and never increases.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from numba import njit

from .corpus import MetaLabel
from .features import CsrMatrix, SparseVector, Vocabulary, fit_vocabulary, vectorize_all
from .metrics import f1_score

log = logging.getLogger(__name__)

UNIFORM = "uniform"
BALANCED = "balanced"

MODEL_FORMAT_VERSION = 1


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class SvmHyperparams:
    c: float = 1.0
    class_weight: str = UNIFORM
    max_iterations: int = 1000
    tolerance: float = 1e-4

    def __post_init__(self) -> None:
        if self.c <= 0 or self.tolerance <= 0 or self.max_iterations <= 0:
            raise TrainingError(f"invalid hyperparameters: {self}")
        if self.class_weight not in (UNIFORM, BALANCED):
            raise TrainingError(f"unknown class_weight {self.class_weight!r}")


def default_grid() -> list[SvmHyperparams]:
    return [
        SvmHyperparams(c=c, class_weight=cw, max_iterations=mi)
        for c in (0.01, 0.1, 1.0, 10.0, 100.0)
        for cw in (UNIFORM, BALANCED)
        for mi in (1000, 10000)
    ]


@dataclass
class LinearModel:
    weights: np.ndarray  # float64 over the vocabulary features
    bias: float
    vocabulary: Vocabulary | None
    hyperparams: SvmHyperparams
    epochs_run: int
    dual_objectives: list[float] = field(repr=False, default_factory=list)
    primal_objective: float = float("nan")

    def decision_value(self, v: SparseVector) -> float:
        return float(np.dot(self.weights[v.indices], v.values)) + self.bias


def predict(model: LinearModel, v: SparseVector) -> tuple[MetaLabel, float]:
    """Facts iff the margin is strictly positive; ties go to NonFacts."""
    margin = model.decision_value(v)
    return (MetaLabel.FACTS if margin > 0.0 else MetaLabel.NON_FACTS), margin


def predict_text(model: LinearModel, text: str) -> tuple[MetaLabel, float]:
    if model.vocabulary is None:
        raise TrainingError("model carries no vocabulary; cannot vectorize text")
    from .features import vectorize

    return predict(model, vectorize(text, model.vocabulary))


@njit(cache=True)
def _cd_epoch(indptr, indices, data, y, alpha, w, qii, upper):  # pragma: no cover
    """One cyclic pass of dual coordinate descent; returns the PG extremes."""
    pg_max = -1.0e300
    pg_min = 1.0e300
    for i in range(alpha.shape[0]):
        lo, hi = indptr[i], indptr[i + 1]
        g = 0.0
        for k in range(lo, hi):
            g += w[indices[k]] * data[k]
        g = g * y[i] - 1.0
        a = alpha[i]
        c = upper[i]
        if a <= 0.0:
            pg = g if g < 0.0 else 0.0
        elif a >= c:
            pg = g if g > 0.0 else 0.0
        else:
            pg = g
        if pg > pg_max:
            pg_max = pg
        if pg < pg_min:
            pg_min = pg
        if pg != 0.0:
            a_new = a - g / qii[i]
            if a_new < 0.0:
                a_new = 0.0
            elif a_new > c:
                a_new = c
            d = (a_new - a) * y[i]
            if d != 0.0:
                for k in range(lo, hi):
                    w[indices[k]] += d * data[k]
                alpha[i] = a_new
    return pg_max, pg_min


def _as_signs(y: Sequence) -> np.ndarray:
    signs = np.empty(len(y), dtype=np.float64)
    for i, label in enumerate(y):
        if isinstance(label, MetaLabel):
            signs[i] = 1.0 if label is MetaLabel.FACTS else -1.0
        else:
            signs[i] = float(label)
    if not np.all(np.abs(signs) == 1.0):
        raise TrainingError("labels must be Facts/NonFacts (or +1/-1)")
    return signs


def _augment_with_bias(X: CsrMatrix) -> CsrMatrix:
    """Append a constant 1.0 feature at index n_features to every row."""
    n = X.n_rows
    indptr = np.empty(n + 1, dtype=np.int64)
    indices = np.empty(len(X.indices) + n, dtype=np.int32)
    data = np.empty(len(X.data) + n, dtype=np.float64)
    indptr[0] = 0
    for i in range(n):
        lo, hi = X.indptr[i], X.indptr[i + 1]
        out_lo = indptr[i]
        out_hi = out_lo + (hi - lo)
        indices[out_lo:out_hi] = X.indices[lo:hi]
        data[out_lo:out_hi] = X.data[lo:hi]
        indices[out_hi] = X.n_features
        data[out_hi] = 1.0
        indptr[i + 1] = out_hi + 1
    return CsrMatrix(indptr=indptr, indices=indices, data=data, n_features=X.n_features + 1)


def primal_objective(
    X: CsrMatrix, signs: np.ndarray, w_aug: np.ndarray, sample_c: np.ndarray
) -> float:
    """Objective of the augmented problem (bias inside the regularizer)."""
    aug = X if X.n_features == len(w_aug) else _augment_with_bias(X)
    total = 0.5 * float(np.dot(w_aug, w_aug))
    for i in range(aug.n_rows):
        lo, hi = aug.indptr[i], aug.indptr[i + 1]
        margin = float(np.dot(w_aug[aug.indices[lo:hi]], aug.data[lo:hi]))
        total += sample_c[i] * max(0.0, 1.0 - signs[i] * margin)
    return total


def class_weighted_c(h: SvmHyperparams, signs: np.ndarray) -> np.ndarray:
    """Per-sample upper bounds C_i = C * cw(y_i)."""
    if h.class_weight == UNIFORM:
        return np.full(len(signs), h.c, dtype=np.float64)
    n = len(signs)
    n_pos = int(np.sum(signs > 0))
    n_neg = n - n_pos
    weights = np.where(signs > 0, n / (2.0 * n_pos), n / (2.0 * n_neg))
    return h.c * weights


def train_linear_svm(
    X: CsrMatrix | Sequence[SparseVector],
    y: Sequence,
    h: SvmHyperparams,
    vocabulary: Vocabulary | None = None,
) -> LinearModel:
    """Train on already-vectorized rows; both classes must be present."""
    if not isinstance(X, CsrMatrix):
        n_features = vocabulary.size if vocabulary is not None else (
            max((int(v.indices[-1]) for v in X if v.nnz), default=-1) + 1
        )
        X = CsrMatrix.from_vectors(list(X), n_features=n_features)
    if X.n_rows == 0 or X.n_rows != len(y):
        raise TrainingError(f"need matching non-empty X and y, got {X.n_rows} rows, {len(y)} labels")
    signs = _as_signs(y)
    if np.all(signs > 0) or np.all(signs < 0):
        raise TrainingError("training data contains a single class")

    aug = _augment_with_bias(X)
    sample_c = class_weighted_c(h, signs)
    qii = np.empty(aug.n_rows, dtype=np.float64)
    for i in range(aug.n_rows):
        row = aug.data[aug.indptr[i] : aug.indptr[i + 1]]
        qii[i] = float(np.dot(row, row))
    alpha = np.zeros(aug.n_rows, dtype=np.float64)
    w = np.zeros(aug.n_features, dtype=np.float64)

    dual_objectives: list[float] = []
    epochs = 0
    for epoch in range(h.max_iterations):
        pg_max, pg_min = _cd_epoch(
            aug.indptr, aug.indices, aug.data, signs, alpha, w, qii, sample_c
        )
        epochs = epoch + 1
        dual_objectives.append(0.5 * float(np.dot(w, w)) - float(np.sum(alpha)))
        if pg_max - pg_min < h.tolerance:
            break

    model = LinearModel(
        weights=w[:-1].copy(),
        bias=float(w[-1]),
        vocabulary=vocabulary,
        hyperparams=h,
        epochs_run=epochs,
        dual_objectives=dual_objectives,
        primal_objective=primal_objective(aug, signs, w, sample_c),
    )
    return model


# --- grid search -------------------------------------------------------------

@dataclass(frozen=True)
class GridSearchResult:
    model: LinearModel
    chosen: SvmHyperparams
    val_f1: float


def grid_search(
    train: Sequence,
    validation: Sequence,
    grid: Sequence[SvmHyperparams],
    ngram_range: tuple[int, int] = (1, 3),
    min_df: int = 1,
) -> GridSearchResult:
    """Train one model per combination; pick the best validation F1.

    Ties break toward smaller C, then earlier grid position. Combinations
    whose training fails are skipped with a warning; if every combination
    fails the search fails.
    """
    if not grid:
        raise TrainingError("empty hyperparameter grid")
    vocab = fit_vocabulary(train, ngram_range=ngram_range, min_df=min_df)
    X_train = vectorize_all(train, vocab)
    X_val = vectorize_all(validation, vocab)
    y_train = [rec.meta_label for rec in train]
    y_val = [rec.meta_label for rec in validation]
    if any(label is None for label in y_train) or any(label is None for label in y_val):
        raise TrainingError("grid search needs recast (meta-labeled) sentences")

    best: tuple[tuple[float, float, int], LinearModel, SvmHyperparams, float] | None = None
    for position, h in enumerate(grid):
        try:
            model = train_linear_svm(X_train, y_train, h, vocabulary=vocab)
        except TrainingError as exc:
            log.warning("grid combination %s failed: %s", h, exc)
            continue
        preds = [predict(model, X_val.row(i))[0] for i in range(X_val.n_rows)]
        score = f1_score(preds, y_val)
        key = (-score, h.c, position)
        if best is None or key < best[0]:
            best = (key, model, h, score)
    if best is None:
        raise TrainingError("every grid combination failed to train")
    _, model, chosen, score = best
    return GridSearchResult(model=model, chosen=chosen, val_f1=score)


# --- model persistence -------------------------------------------------------

def save_model(model: LinearModel, path: str | Path) -> None:
    vocab = model.vocabulary
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "hyperparams": {
            "c": model.hyperparams.c,
            "class_weight": model.hyperparams.class_weight,
            "max_iterations": model.hyperparams.max_iterations,
            "tolerance": model.hyperparams.tolerance,
        },
        "bias": model.bias,
        "weights": model.weights.tolist(),
        "vocabulary": None
        if vocab is None
        else {
            "ngram_range": list(vocab.ngram_range),
            "min_df": vocab.min_df,
            "n_train_sentences": vocab.n_train_sentences,
            "ngrams": sorted(vocab.index, key=vocab.index.get),
            "document_frequency": vocab.document_frequency.tolist(),
        },
        "training": {
            "epochs_run": model.epochs_run,
            "final_dual_objective": model.dual_objectives[-1] if model.dual_objectives else None,
            "primal_objective": model.primal_objective,
        },
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")


def load_model(path: str | Path) -> LinearModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise TrainingError(f"unsupported model format in {path}")
    vocab_payload = payload["vocabulary"]
    vocab = None
    if vocab_payload is not None:
        ngrams = vocab_payload["ngrams"]
        vocab = Vocabulary(
            index={gram: i for i, gram in enumerate(ngrams)},
            document_frequency=np.array(vocab_payload["document_frequency"], dtype=np.int64),
            n_train_sentences=vocab_payload["n_train_sentences"],
            ngram_range=tuple(vocab_payload["ngram_range"]),
            min_df=vocab_payload["min_df"],
        )
    hp = payload["hyperparams"]
    training = payload.get("training", {})
    final_dual = training.get("final_dual_objective")
    return LinearModel(
        weights=np.array(payload["weights"], dtype=np.float64),
        bias=float(payload["bias"]),
        vocabulary=vocab,
        hyperparams=SvmHyperparams(
            c=hp["c"],
            class_weight=hp["class_weight"],
            max_iterations=hp["max_iterations"],
            tolerance=hp["tolerance"],
        ),
        epochs_run=int(training.get("epochs_run", 0)),
        dual_objectives=[] if final_dual is None else [final_dual],
        primal_objective=training.get("primal_objective", float("nan")),
    )
