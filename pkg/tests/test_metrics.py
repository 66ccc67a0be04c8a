import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdrbench.metrics import (
    ConfusionCounts,
    MetricsError,
    aggregate,
    confusion,
    format_cell,
    metrics,
)


def oracle_metrics(tp, fp, tn, fn):
    """Independent direct evaluation of the metric formulas (0/0 -> 0)."""
    def div(a, b):
        return a / b if b else 0.0

    precision = div(tp, tp + fp)
    recall = div(tp, tp + fn)
    f1 = div(2 * precision * recall, precision + recall)
    denom = np.sqrt(float(tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    mcc = div(float(tp) * tn - float(fp) * fn, denom)
    ba = (div(tp, tp + fn) + div(tn, tn + fp)) / 2.0
    return precision, recall, f1, mcc, ba


class TestConfusion:
    def test_basic_counts(self):
        c = confusion([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])
        assert (c.tp, c.fp, c.tn, c.fn) == (2, 1, 1, 1)

    def test_rejects_length_mismatch(self):
        with pytest.raises(MetricsError):
            confusion([1, 0], [1])

    def test_rejects_nonbinary(self):
        with pytest.raises(MetricsError):
            confusion([1, 2], [1, 0])


class TestMetricFormulas:
    def test_perfect_prediction(self):
        m = metrics(ConfusionCounts(tp=5, fp=0, tn=5, fn=0))
        assert m.precision == m.recall == m.f1 == m.mcc == 1.0
        assert m.balanced_accuracy == 1.0

    def test_majority_class_predictor(self):
        # all-negative predictions on imbalanced truth render as 0.00/50.00
        m = metrics(ConfusionCounts(tp=0, fp=0, tn=78, fn=22))
        assert m.precision == 0.0
        assert m.recall == 0.0
        assert m.f1 == 0.0
        assert m.mcc == 0.0
        assert m.balanced_accuracy == 0.5
        assert format_cell(m.balanced_accuracy, 0.0) == "50.00 (0.00)"

    def test_degenerate_flag(self):
        assert metrics(ConfusionCounts(tp=3, fp=0, tn=0, fn=2)).degenerate
        assert not metrics(ConfusionCounts(tp=1, fp=1, tn=1, fn=1)).degenerate

    def test_empty_counts_rejected(self):
        with pytest.raises(MetricsError):
            metrics(ConfusionCounts(0, 0, 0, 0))

    def test_random_counts_against_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            tp, fp, tn, fn = (int(v) for v in rng.integers(0, 50, size=4))
            if tp + fp + tn + fn == 0:
                continue
            m = metrics(ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn))
            ref = oracle_metrics(tp, fp, tn, fn)
            got = (m.precision, m.recall, m.f1, m.mcc, m.balanced_accuracy)
            assert np.allclose(got, ref, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1))
def test_prediction_order_invariance(pairs):
    """Metrics depend only on the joint counts, not the sample order."""
    y_true = [a for a, _ in pairs]
    y_pred = [b for _, b in pairs]
    m1 = metrics(confusion(y_true, y_pred))
    perm = np.random.default_rng(0).permutation(len(pairs))
    m2 = metrics(confusion(np.array(y_true)[perm], np.array(y_pred)[perm]))
    assert m1 == m2


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 200), st.integers(0, 200),
    st.integers(0, 200), st.integers(0, 200),
)
def test_balanced_accuracy_equals_accuracy_when_balanced(tp, fp, fn, k):
    # force a balanced confusion table: same number of positives and negatives
    tn = tp + fn - fp
    if tn < 0:
        return
    m = metrics(ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn))
    total = tp + fp + tn + fn
    accuracy = (tp + tn) / total
    assert m.balanced_accuracy == pytest.approx(accuracy, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 99), st.integers(0, 99), st.integers(0, 99), st.integers(0, 99))
def test_mcc_symmetric_under_class_relabeling(tp, fp, tn, fn):
    if tp + fp + tn + fn == 0:
        return
    m = metrics(ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn))
    flipped = metrics(ConfusionCounts(tp=tn, fp=fn, tn=tp, fn=fp))
    assert m.mcc == pytest.approx(flipped.mcc, abs=1e-12)
    assert m.balanced_accuracy == pytest.approx(
        flipped.balanced_accuracy, abs=1e-12
    )


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 99), st.integers(0, 99), st.integers(0, 99), st.integers(0, 99))
def test_metric_ranges(tp, fp, tn, fn):
    if tp + fp + tn + fn == 0:
        return
    m = metrics(ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn))
    for name in ("precision", "recall", "f1", "balanced_accuracy"):
        assert 0.0 <= getattr(m, name) <= 1.0
    assert -1.0 <= m.mcc <= 1.0


class TestAggregate:
    def test_mean_and_population_std(self):
        folds = [
            metrics(ConfusionCounts(tp=1, fp=0, tn=1, fn=0)),
            metrics(ConfusionCounts(tp=0, fp=0, tn=2, fn=1)),
        ]
        rep = aggregate(folds, model="nb", reducer="pca", seed=3)
        assert rep.mean["balanced_accuracy"] == pytest.approx(0.75)
        assert rep.std["balanced_accuracy"] == pytest.approx(0.25)  # population
        assert rep.model == "nb" and rep.reducer == "pca" and rep.seed == 3

    def test_formatted_cell(self):
        folds = [metrics(ConfusionCounts(tp=1, fp=0, tn=1, fn=0))]
        rep = aggregate(folds)
        assert rep.formatted("f1") == "100.00 (0.00)"

    def test_empty_rejected(self):
        with pytest.raises(MetricsError):
            aggregate([])
