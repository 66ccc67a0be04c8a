"""CSV ingestion, z-score standardization, subsampling and k-fold plans."""

import csv
from dataclasses import dataclass, field

import numpy as np


class DataError(ValueError):
    pass


@dataclass
class DataTable:
    features: np.ndarray  # (n_samples, n_features) float64
    labels: np.ndarray  # (n_samples,) int, values in {0, 1}
    feature_names: list
    n_dropped: int = 0

    @property
    def n_samples(self):
        return self.features.shape[0]

    @property
    def n_features(self):
        return self.features.shape[1]

    def take(self, indices):
        return DataTable(
            features=self.features[indices],
            labels=self.labels[indices],
            feature_names=list(self.feature_names),
        )


@dataclass
class SplitPlan:
    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int


@dataclass
class FoldPlan:
    folds: list  # list of (train_indices, test_indices)
    k: int


@dataclass
class Standardizer:
    mean: np.ndarray
    std: np.ndarray  # zero for constant columns

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        safe = np.where(self.std > 0, self.std, 1.0)
        out = (x - self.mean) / safe
        out[..., self.std == 0] = 0.0
        return out


def load_csv(path, target_column, drop_columns=()):
    """Load an RFC-4180 CSV with header, dropping rows that fail to parse.

    The target column is removed from the features and must be binary.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        if target_column not in header:
            raise DataError(f"target column {target_column!r} not in header")
        drop = set(drop_columns)
        keep = [
            i for i, name in enumerate(header)
            if name != target_column and name not in drop
        ]
        target_idx = header.index(target_column)
        feature_names = [header[i] for i in keep]

        rows = []
        labels = []
        n_dropped = 0
        for rec in reader:
            if len(rec) != len(header):
                n_dropped += 1
                continue
            try:
                vals = [float(rec[i]) for i in keep]
                y = float(rec[target_idx])
            except ValueError:
                n_dropped += 1
                continue
            if not all(np.isfinite(v) for v in vals) or not np.isfinite(y):
                n_dropped += 1
                continue
            rows.append(vals)
            labels.append(y)

    if not rows:
        raise DataError(f"{path}: no usable rows after cleaning")
    labels = np.asarray(labels)
    if not np.isin(labels, (0.0, 1.0)).all():
        bad = sorted(set(labels) - {0.0, 1.0})
        raise DataError(f"target column is not binary; saw values {bad[:5]}")
    return DataTable(
        features=np.asarray(rows, dtype=np.float64),
        labels=labels.astype(np.int64),
        feature_names=feature_names,
        n_dropped=n_dropped,
    )


def dump_csv(table, path, target_column="target"):
    """Write a cleaned table back out (debugging aid)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(table.feature_names) + [target_column])
        for row, y in zip(table.features, table.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(y)])


def fit_standardizer(x):
    x = np.asarray(x, dtype=np.float64)
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std > 1e-12 * np.maximum(np.abs(mean), 1.0), std, 0.0)
    return Standardizer(mean=mean, std=std)


def standardize(table):
    """Z-score each feature column; constant columns map to zero."""
    if table.n_samples == 0:
        raise DataError("cannot standardize an empty table")
    scaler = fit_standardizer(table.features)
    out = DataTable(
        features=scaler.apply(table.features),
        labels=table.labels,
        feature_names=list(table.feature_names),
    )
    return out, scaler


def subsample(table, n_train, n_test, seed, stratified=True):
    """Deterministic (seeded) train/test index split, stratified by default."""
    n = table.n_samples
    if n_train + n_test > n:
        raise DataError(
            f"requested {n_train}+{n_test} samples from a table of {n}"
        )
    rng = np.random.default_rng(seed)
    if not stratified:
        perm = rng.permutation(n)
        return SplitPlan(perm[:n_train], perm[n_train:n_train + n_test], seed)

    classes = np.unique(table.labels)
    train_parts, test_parts = [], []
    # largest-remainder allocation keeps class proportions within one sample
    fracs = {c: np.mean(table.labels == c) for c in classes}
    counts_train = _allocate(n_train, [fracs[c] for c in classes])
    counts_test = _allocate(n_test, [fracs[c] for c in classes])
    for c, ct_train, ct_test in zip(classes, counts_train, counts_test):
        idx = np.flatnonzero(table.labels == c)
        if ct_train + ct_test > idx.size:
            raise DataError(f"class {c} has too few samples for the split")
        idx = rng.permutation(idx)
        train_parts.append(idx[:ct_train])
        test_parts.append(idx[ct_train:ct_train + ct_test])
    train = rng.permutation(np.concatenate(train_parts))
    test = rng.permutation(np.concatenate(test_parts))
    if n_train > 0 and len(classes) > 1:
        for c in classes:
            if not np.any(table.labels[train] == c):
                raise DataError(f"class {c} absent from stratified train part")
    if n_test > 0 and len(classes) > 1:
        for c in classes:
            if not np.any(table.labels[test] == c):
                raise DataError(f"class {c} absent from stratified test part")
    return SplitPlan(train, test, seed)


def _allocate(total, fracs):
    raw = [total * f for f in fracs]
    base = [int(np.floor(r)) for r in raw]
    rem = total - sum(base)
    order = np.argsort([b - r for b, r in zip(base, raw)], kind="stable")
    for i in order[:rem]:
        base[i] += 1
    return base


def kfold(n, k, seed):
    """Seeded shuffled k-fold plan; fold sizes differ by at most one."""
    if k < 2:
        raise DataError(f"k must be at least 2, got {k}")
    if k > n:
        raise DataError(f"k={k} exceeds the number of samples n={n}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    test_parts = np.array_split(perm, k)
    folds = []
    for part in test_parts:
        mask = np.ones(n, dtype=bool)
        mask[part] = False
        folds.append((perm[mask[perm]], part.copy()))
    return FoldPlan(folds=folds, k=k)
