"""Binary precision / recall / F1 with Facts as the positive class."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import MetaLabel


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def n_sentences(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


def confusion(pred: Sequence[MetaLabel], gold: Sequence[MetaLabel]) -> ConfusionCounts:
    if len(pred) != len(gold):
        raise MetricsError(f"length mismatch: {len(pred)} predictions vs {len(gold)} gold labels")
    if not pred:
        raise MetricsError("cannot score an empty prediction list")
    tp = fp = fn = tn = 0
    for p, g in zip(pred, gold):
        if p is MetaLabel.FACTS:
            if g is MetaLabel.FACTS:
                tp += 1
            else:
                fp += 1
        else:
            if g is MetaLabel.FACTS:
                fn += 1
            else:
                tn += 1
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def prf1(c: ConfusionCounts) -> Metrics:
    """P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2PR/(P+R); 0 on zero denominators."""
    precision = c.tp / (c.tp + c.fp) if (c.tp + c.fp) else 0.0
    recall = c.tp / (c.tp + c.fn) if (c.tp + c.fn) else 0.0
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
    return Metrics(precision=precision, recall=recall, f1=f1)


def f1_score(pred: Sequence[MetaLabel], gold: Sequence[MetaLabel]) -> float:
    return prf1(confusion(pred, gold)).f1
