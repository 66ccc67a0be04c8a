"""Synthetic imbalanced tabular datasets with the structure that drives the
benchmark: a few weakly label-linked columns buried under correlated
high-variance noise blocks. Variance-seeking reductions (SVD/PCA) latch onto
the noise factors while the supervised ones recover the signal columns.

Used for tests, the acceptance suite, and demo runs when the real CSV files
are not available locally.
"""

from dataclasses import dataclass, replace

import numpy as np

from .data import DataTable, dump_csv


@dataclass
class SurrogateSpec:
    n_rows: int
    n_features: int
    pos_fraction: float
    signal_columns: tuple  # column indices carrying label signal
    signal_shift: float  # class-1 mean offset on signal columns
    signal_scale: float  # class-1 std on signal columns (class 0 has std 1)
    noise_rho: float = 0.6  # within-block correlation of the noise factors
    n_noise_blocks: int = 2
    noise_log_scale: tuple = (1.5, 4.5)  # log10 range of raw noise-column units


UCI_LIKE = SurrogateSpec(
    n_rows=3000,
    n_features=23,
    pos_fraction=0.22,
    signal_columns=(5, 17),
    signal_shift=1.2,
    signal_scale=0.12,
)

FRAUD_LIKE = SurrogateSpec(
    n_rows=3000,
    n_features=114,
    pos_fraction=0.27,
    signal_columns=(20, 90),
    signal_shift=1.0,
    signal_scale=0.15,
)


def make_surrogate(spec, seed):
    """Deterministic surrogate table for a given seed."""
    rng = np.random.default_rng(seed)
    n, d = spec.n_rows, spec.n_features
    y = (rng.random(n) < spec.pos_fraction).astype(np.int64)
    if y.sum() == 0 or y.sum() == n:
        y[0] = 1 - y[0]

    x = np.empty((n, d))
    noise_cols = [c for c in range(d) if c not in spec.signal_columns]
    blocks = np.array_split(np.array(noise_cols), spec.n_noise_blocks)
    rho = spec.noise_rho
    lo, hi = spec.noise_log_scale
    for block in blocks:
        factor = rng.standard_normal(n)
        for c in block:
            # raw monetary-style units: each column has its own large scale
            unit = 10.0 ** rng.uniform(lo, hi)
            x[:, c] = unit * (
                np.sqrt(rho) * factor
                + np.sqrt(1 - rho) * rng.standard_normal(n)
            )
    for c in spec.signal_columns:
        base = rng.standard_normal(n)
        x[:, c] = np.where(
            y == 1,
            spec.signal_shift + spec.signal_scale * base,
            base,
        )
    names = [f"f{i}" for i in range(d)]
    return DataTable(features=x, labels=y, feature_names=names)


def uci_like(seed=0, n_rows=None):
    spec = UCI_LIKE if n_rows is None else _resize(UCI_LIKE, n_rows)
    return make_surrogate(spec, seed)


def fraud_like(seed=0, n_rows=None):
    spec = FRAUD_LIKE if n_rows is None else _resize(FRAUD_LIKE, n_rows)
    return make_surrogate(spec, seed)


def _resize(spec, n_rows):
    return replace(spec, n_rows=n_rows)


def write_surrogate_csv(path, table, target_column="target"):
    dump_csv(table, path, target_column=target_column)


def separable_blobs(n=200, seed=0, gap=4.0):
    """Two linearly separable 2-D clusters, balanced classes."""
    rng = np.random.default_rng(seed)
    half = n // 2
    neg = rng.standard_normal((half, 2)) * 0.5
    pos = rng.standard_normal((n - half, 2)) * 0.5 + gap / np.sqrt(2.0)
    x = np.vstack([neg, pos])
    y = np.concatenate([np.zeros(half, np.int64), np.ones(n - half, np.int64)])
    perm = rng.permutation(n)
    return x[perm], y[perm]
