from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factbench.corpus import MetaLabel
from factbench.metrics import ConfusionCounts, MetricsError, confusion, f1_score, prf1

FACTS = MetaLabel.FACTS
NON = MetaLabel.NON_FACTS


def brute_force_confusion(pred, gold):
    """Independent counter: filter-and-count each quadrant separately."""
    pairs = list(zip(pred, gold))
    return ConfusionCounts(
        tp=len([1 for p, g in pairs if p == FACTS and g == FACTS]),
        fp=len([1 for p, g in pairs if p == FACTS and g == NON]),
        fn=len([1 for p, g in pairs if p == NON and g == FACTS]),
        tn=len([1 for p, g in pairs if p == NON and g == NON]),
    )


def test_perfect_prediction():
    c = confusion([FACTS, NON], [FACTS, NON])
    assert (c.tp, c.tn, c.fp, c.fn) == (1, 1, 0, 0)


def test_all_false_positives():
    c = confusion([FACTS, FACTS], [NON, NON])
    assert (c.tp, c.fp, c.fn, c.tn) == (0, 2, 0, 0)


def test_counts_sum_to_n():
    c = confusion([FACTS, NON, FACTS], [NON, NON, FACTS])
    assert c.n_sentences == 3


def test_length_mismatch_rejected():
    with pytest.raises(MetricsError):
        confusion([FACTS], [FACTS, NON])


def test_empty_rejected():
    with pytest.raises(MetricsError):
        confusion([], [])


def test_thousand_random_pairs_match_brute_force():
    rng = random.Random(20260809)
    pred = [rng.choice([FACTS, NON]) for _ in range(1000)]
    gold = [rng.choice([FACTS, NON]) for _ in range(1000)]
    assert confusion(pred, gold) == brute_force_confusion(pred, gold)


def test_prf1_balanced_example():
    m = prf1(ConfusionCounts(tp=1, fp=1, fn=1, tn=0))
    assert m.precision == 0.5
    assert m.recall == 0.5
    assert m.f1 == 0.5


def test_prf1_degenerate_all_negative():
    m = prf1(ConfusionCounts(tp=0, fp=0, fn=0, tn=5))
    assert (m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0)


def test_prf1_perfect_recall_identity():
    m = prf1(ConfusionCounts(tp=2420, fp=0, fn=0, tn=0))
    assert m.f1 == 1.0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50),
       st.integers(1, 9))
def test_prf1_is_scale_free(tp, fp, fn, tn, k):
    base = prf1(ConfusionCounts(tp, fp, fn, tn))
    scaled = prf1(ConfusionCounts(tp * k, fp * k, fn * k, tn * k))
    assert scaled.precision == pytest.approx(base.precision, abs=1e-12)
    assert scaled.recall == pytest.approx(base.recall, abs=1e-12)
    assert scaled.f1 == pytest.approx(base.f1, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_f1_symmetric_and_bounded(tp, fp, fn, tn):
    m = prf1(ConfusionCounts(tp, fp, fn, tn))
    swapped = prf1(ConfusionCounts(tp, fn, fp, tn))  # swaps P and R
    assert m.f1 == pytest.approx(swapped.f1, abs=1e-12)
    assert m.f1 <= min(2 * m.precision, 2 * m.recall) + 1e-12
    assert 0.0 <= m.f1 <= 1.0


def test_f1_score_shortcut():
    assert f1_score([FACTS, NON], [FACTS, NON]) == 1.0
