"""Deterministic document-level train/validation/test assignment.

Documents are ordered by the hex digest of ``SHA-256(seed ":" dataset_id ":"
doc_id)`` and the sorted list is cut at round-half-up(0.5 n) and
round-half-up(0.25 n); the test fold absorbs the remainder. No RNG state is
involved, so the same seed yields the same split on any platform and in any
input order.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus, SentenceRecord

DEFAULT_SEED = "rr-v1"
DEFAULT_RATIOS = (0.50, 0.25, 0.25)


class Fold(str, Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"


class SplitError(ValueError):
    """Raised for invalid split requests or assignments."""


@dataclass(frozen=True)
class SplitAssignment:
    folds: dict[tuple[str, str], Fold]
    seed: str | None = DEFAULT_SEED
    ratios: tuple[float, float, float] | None = DEFAULT_RATIOS

    def fold_of(self, dataset_id: str, doc_id: str) -> Fold:
        try:
            return self.folds[(dataset_id, doc_id)]
        except KeyError:
            raise SplitError(f"document {dataset_id}/{doc_id} missing from assignment") from None

    def fold_sizes(self, dataset_id: str) -> dict[Fold, int]:
        sizes = {fold: 0 for fold in Fold}
        for (ds, _), fold in self.folds.items():
            if ds == dataset_id:
                sizes[fold] += 1
        return sizes


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _doc_digest(seed: str, dataset_id: str, doc_id: str) -> str:
    payload = f"{seed}:{dataset_id}:{doc_id}".encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def assign_splits(
    corpus: Corpus,
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: str = DEFAULT_SEED,
) -> SplitAssignment:
    """Assign every document of the corpus to a fold, deterministically."""
    if len(ratios) != 3 or abs(sum(ratios) - 1.0) > 1e-9:
        raise SplitError(f"ratios must be three values summing to 1, got {ratios!r}")
    if corpus.n_documents == 0:
        raise SplitError(f"corpus {corpus.dataset_id} has no documents")
    doc_ids = [doc.doc_id for doc in corpus.documents]
    if len(set(doc_ids)) != len(doc_ids):
        raise SplitError(f"duplicate doc_id in corpus {corpus.dataset_id}")
    ordered = sorted(doc_ids, key=lambda d: _doc_digest(seed, corpus.dataset_id, d))
    n = len(ordered)
    n_train = _round_half_up(ratios[0] * n)
    n_val = _round_half_up(ratios[1] * n)
    folds: dict[tuple[str, str], Fold] = {}
    for pos, doc_id in enumerate(ordered):
        if pos < n_train:
            fold = Fold.TRAIN
        elif pos < n_train + n_val:
            fold = Fold.VALIDATION
        else:
            fold = Fold.TEST
        folds[(corpus.dataset_id, doc_id)] = fold
    return SplitAssignment(folds=folds, seed=seed, ratios=tuple(ratios))


def assign_all(
    corpora: Iterable[Corpus],
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: str = DEFAULT_SEED,
) -> SplitAssignment:
    """One merged assignment covering several corpora (split per dataset)."""
    folds: dict[tuple[str, str], Fold] = {}
    for corpus in corpora:
        part = assign_splits(corpus, ratios=ratios, seed=seed)
        overlap = folds.keys() & part.folds.keys()
        if overlap:
            raise SplitError(f"documents assigned twice: {sorted(overlap)[:3]}")
        folds.update(part.folds)
    return SplitAssignment(folds=folds, seed=seed, ratios=tuple(ratios))


def materialize_fold(
    corpus: Corpus, assignment: SplitAssignment, fold: Fold
) -> list[SentenceRecord]:
    """All sentences of the corpus documents assigned to the fold, in order."""
    out: list[SentenceRecord] = []
    for doc in corpus.documents:
        if assignment.fold_of(corpus.dataset_id, doc.doc_id) is fold:
            out.extend(doc.sentences)
    return out


def write_split_manifest(assignment: SplitAssignment, path: str | Path) -> None:
    rows = sorted(assignment.folds.items())
    with open(path, "w", encoding="utf-8") as fh:
        for (dataset, doc_id), fold in rows:
            obj = {"dataset": dataset, "doc_id": doc_id, "fold": fold.value}
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


def read_split_manifest(path: str | Path) -> SplitAssignment:
    folds: dict[tuple[str, str], Fold] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                key = (obj["dataset"], obj["doc_id"])
                fold = Fold(obj["fold"])
            except (KeyError, ValueError) as exc:
                raise SplitError(f"{path}:{lineno}: bad manifest row: {exc}") from exc
            if key in folds:
                raise SplitError(f"{path}:{lineno}: duplicate document {key}")
            folds[key] = fold
    return SplitAssignment(folds=folds, seed=None, ratios=None)
