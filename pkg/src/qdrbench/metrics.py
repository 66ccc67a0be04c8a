"""Confusion-matrix metrics and k-fold aggregation.

Conventions for degenerate predictors: every 0/0 ratio resolves to 0 so a
majority-class model reports 0.00 precision/recall/f1/MCC and 50.00 balanced
accuracy instead of NaN. Balanced accuracy is the arithmetic mean of the
true-positive and true-negative rates.
"""

from dataclasses import dataclass, field

import numpy as np

METRIC_NAMES = ("precision", "recall", "f1", "mcc", "balanced_accuracy")


class MetricsError(ValueError):
    pass


@dataclass
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn


@dataclass
class MetricSet:
    precision: float
    recall: float
    f1: float
    mcc: float
    balanced_accuracy: float
    degenerate: bool = False  # a class absent from y_true

    def as_dict(self):
        return {name: getattr(self, name) for name in METRIC_NAMES}


@dataclass
class EvalReport:
    folds: list  # list of MetricSet
    mean: dict
    std: dict
    model: str = ""
    reducer: str = ""
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def formatted(self, name):
        return format_cell(self.mean[name], self.std[name])


def format_cell(mean, std):
    """Percent with two decimals, paper-table style: '12.34 (0.56)'."""
    return f"{100.0 * mean:.2f} ({100.0 * std:.2f})"


def confusion(y_true, y_pred):
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise MetricsError(
            f"length mismatch: {y_true.shape} vs {y_pred.shape}"
        )
    for arr, which in ((y_true, "y_true"), (y_pred, "y_pred")):
        if not np.isin(arr, (0, 1)).all():
            raise MetricsError(f"{which} contains labels outside {{0, 1}}")
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def _ratio(num, den):
    return num / den if den > 0 else 0.0


def metrics(c):
    if c.total <= 0:
        raise MetricsError("empty confusion counts")
    precision = _ratio(c.tp, c.tp + c.fp)
    recall = _ratio(c.tp, c.tp + c.fn)
    f1 = _ratio(2.0 * precision * recall, precision + recall)
    denom = (
        float(c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    )
    mcc = _ratio(float(c.tp) * c.tn - float(c.fp) * c.fn, np.sqrt(denom))
    tpr = _ratio(c.tp, c.tp + c.fn)
    tnr = _ratio(c.tn, c.tn + c.fp)
    ba = (tpr + tnr) / 2.0
    degenerate = (c.tp + c.fn == 0) or (c.tn + c.fp == 0)
    return MetricSet(
        precision=precision,
        recall=recall,
        f1=f1,
        mcc=mcc,
        balanced_accuracy=ba,
        degenerate=degenerate,
    )


def aggregate(per_fold, model="", reducer="", seed=0):
    """Arithmetic mean and population standard deviation per metric."""
    if not per_fold:
        raise MetricsError("no folds to aggregate")
    mean = {}
    std = {}
    for name in METRIC_NAMES:
        vals = np.array([getattr(m, name) for m in per_fold], dtype=float)
        mean[name] = float(vals.mean())
        std[name] = float(vals.std())  # population std
    return EvalReport(
        folds=list(per_fold), mean=mean, std=std,
        model=model, reducer=reducer, seed=seed,
    )
