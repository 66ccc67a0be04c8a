"""Dimensionality reduction: SVD, PCA, kurtosis projection pursuit, split LDA.

All fitters return a :class:`Reducer` holding a training mean and a
column-unit-norm projection matrix; ``transform`` is (x - mean) @ projection.
The split-LDA variant partitions the feature columns into two contiguous
halves and fits a one-component Fisher direction on each, yielding two output
dimensions from binary labels.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg


class DimRedError(ValueError):
    pass


class DegenerateClassesError(DimRedError):
    pass


@dataclass
class Reducer:
    method: str  # svd | pca | skpp | lda_split
    mean: np.ndarray
    projection: np.ndarray  # (n_features, n_components), unit-norm columns
    components: int
    metadata: dict = field(default_factory=dict)


def kurtosis(z):
    """Fourth central moment over squared biased variance of a 1-D sample."""
    z = np.asarray(z, dtype=np.float64).ravel()
    if z.size < 2:
        raise DimRedError("kurtosis needs at least two samples")
    d = z - z.mean()
    m2 = np.mean(d * d)
    if m2 <= 0.0:
        raise DimRedError("kurtosis undefined for zero-variance samples")
    return float(np.mean(d ** 4) / (m2 * m2))


def _normalize_columns(p):
    norms = np.linalg.norm(p, axis=0)
    norms[norms == 0] = 1.0
    return p / norms


def _pad_components(vectors, n_features, n_components, rank):
    """Fill rank-deficient trailing components with an orthogonal complement."""
    warnings.warn(
        f"rank {rank} below requested {n_components} components; "
        "padding with orthogonal complement",
        RuntimeWarning,
        stacklevel=3,
    )
    basis = [vectors[:, i] for i in range(rank)]
    cols = list(basis)
    e = 0
    while len(cols) < n_components:
        cand = np.zeros(n_features)
        cand[e % n_features] = 1.0
        for b in cols:
            cand = cand - (b @ cand) * b
        if np.linalg.norm(cand) > 1e-8:
            cols.append(cand / np.linalg.norm(cand))
        e += 1
    return np.stack(cols, axis=1)


def fit_svd(train, n_components):
    """Top right singular directions of the raw (uncentered) feature matrix."""
    x = np.asarray(train.features, dtype=np.float64)
    _check_components(x, n_components)
    dec = linalg.svd(x)
    v = dec.vt.T[:, :n_components]
    rank = int(np.sum(dec.singular_values > 1e-10 * max(dec.singular_values[0], 1.0)))
    if rank < n_components:
        v = _pad_components(dec.vt.T, x.shape[1], n_components, rank)
    return Reducer(
        method="svd",
        mean=np.zeros(x.shape[1]),
        projection=_normalize_columns(v),
        components=n_components,
        metadata={"singular_values": dec.singular_values[:n_components].copy()},
    )


def fit_pca(train, n_components):
    """Top eigenvectors of the mean-centered covariance matrix."""
    x = np.asarray(train.features, dtype=np.float64)
    _check_components(x, n_components)
    mean = x.mean(axis=0)
    centered = x - mean
    denom = max(x.shape[0] - 1, 1)
    cov = centered.T @ centered / denom
    eig = linalg.eig_symmetric((cov + cov.T) / 2.0)
    v = eig.eigenvectors[:, :n_components]
    scale = max(abs(eig.eigenvalues[0]), 1.0)
    rank = int(np.sum(eig.eigenvalues > 1e-10 * scale))
    if rank < n_components:
        v = _pad_components(eig.eigenvectors, x.shape[1], n_components, rank)
    return Reducer(
        method="pca",
        mean=mean,
        projection=_normalize_columns(v),
        components=n_components,
        metadata={"eigenvalues": eig.eigenvalues[:n_components].copy()},
    )


def _check_components(x, n_components):
    if x.shape[0] == 0:
        raise DimRedError("empty training table")
    if n_components < 1 or n_components > x.shape[1]:
        raise DimRedError(
            f"n_components={n_components} invalid for {x.shape[1]} features"
        )


def _class_kurtosis_objective(x_by_class, w):
    """Pooled within-class kurtosis of the projections (to be minimized)."""
    total = 0.0
    for xc in x_by_class:
        total += kurtosis(xc @ w)
    return total


def _class_kurtosis_gradient(x_by_class, w):
    g = np.zeros_like(w)
    for xc in x_by_class:
        z = xc @ w
        zc = z - z.mean()
        xcen = xc - xc.mean(axis=0)
        n = z.size
        m2 = np.mean(zc * zc)
        m4 = np.mean(zc ** 4)
        dm4 = 4.0 / n * (zc ** 3) @ xcen
        dm2 = 2.0 / n * zc @ xcen
        g += (dm4 * m2 - 2.0 * m4 * dm2) / m2 ** 3
    return g


def fit_skpp(train, n_components, restarts=8, seed=0):
    """Supervised kurtosis projection pursuit.

    Minimizes the pooled within-class kurtosis of the projected sample over
    unit directions via projected gradient descent with random restarts;
    successive components are orthogonalized against earlier ones.
    """
    x = np.asarray(train.features, dtype=np.float64)
    _check_components(x, n_components)
    labels = np.asarray(train.labels)
    x_by_class = [x[labels == c] for c in np.unique(labels)]
    x_by_class = [xc for xc in x_by_class if xc.shape[0] >= 2]
    if not x_by_class:
        raise DimRedError("no class has enough samples for kurtosis pursuit")

    rng = np.random.default_rng(seed)
    d = x.shape[1]
    columns = []
    achieved = []
    for _ in range(n_components):
        best_w, best_val, baseline = None, np.inf, np.inf
        for _ in range(max(restarts, 1)):
            w0 = _orthogonalize(rng.standard_normal(d), columns)
            if w0 is None:
                continue
            start_val = _safe_objective(x_by_class, w0)
            baseline = min(baseline, start_val)
            w, val = _minimize_direction(x_by_class, w0, columns)
            if val < best_val:
                best_w, best_val = w, val
        if best_w is None or not np.isfinite(best_val):
            raise DimRedError("all kurtosis-pursuit restarts failed")
        if best_val > baseline + 1e-9:
            raise DimRedError(
                "kurtosis pursuit failed to improve on its random starts "
                f"(best {best_val:.4f} vs baseline {baseline:.4f})"
            )
        columns.append(best_w)
        achieved.append(best_val)

    projection = np.stack(columns, axis=1)
    return Reducer(
        method="skpp",
        mean=x.mean(axis=0),
        projection=_normalize_columns(projection),
        components=n_components,
        metadata={"kurtosis_index": achieved},
    )


def _safe_objective(x_by_class, w):
    try:
        return _class_kurtosis_objective(x_by_class, w)
    except DimRedError:
        return np.inf


def _orthogonalize(w, columns, min_norm=1e-8):
    for c in columns:
        w = w - (c @ w) * c
    norm = np.linalg.norm(w)
    if norm < min_norm:
        return None
    return w / norm


def _minimize_direction(x_by_class, w0, columns, max_iter=200, tol=1e-10):
    w = w0
    val = _safe_objective(x_by_class, w)
    lr = 0.1
    for _ in range(max_iter):
        g = _class_kurtosis_gradient(x_by_class, w)
        g = g - (g @ w) * w  # tangent step on the unit sphere
        for c in columns:
            g = g - (c @ g) * c
        gnorm = np.linalg.norm(g)
        if gnorm < 1e-12:
            break
        stepped = False
        while lr > 1e-12:
            w_new = _orthogonalize(w - lr * g / gnorm, columns)
            if w_new is not None:
                val_new = _safe_objective(x_by_class, w_new)
                if val_new < val - tol:
                    w, val = w_new, val_new
                    lr = min(lr * 1.5, 1.0)
                    stepped = True
                    break
            lr *= 0.5
        if not stepped:
            break
    return w, val


def _fisher_direction(x, labels, eps_scale=1e-6):
    classes = np.unique(labels)
    if classes.size != 2:
        raise DegenerateClassesError("split LDA needs exactly two classes")
    mu = {c: x[labels == c].mean(axis=0) for c in classes}
    d = x.shape[1]
    sw = np.zeros((d, d))
    for c in classes:
        xc = x[labels == c] - mu[c]
        sw += xc.T @ xc
    eps = eps_scale * np.trace(sw) / d if np.trace(sw) > 0 else eps_scale
    delta = mu[classes[1]] - mu[classes[0]]
    w = np.linalg.solve(sw + eps * np.eye(d), delta)
    norm = np.linalg.norm(w)
    if norm < 1e-300:
        return None, 0.0
    w = w / norm
    return w, fisher_ratio(x, labels, w)


def fisher_ratio(x, labels, w):
    """Between-class over within-class variance of the projection x @ w."""
    z = x @ w
    classes = np.unique(labels)
    overall = z.mean()
    between = 0.0
    within = 0.0
    for c in classes:
        zc = z[labels == c]
        between += zc.size * (zc.mean() - overall) ** 2
        within += np.sum((zc - zc.mean()) ** 2)
    if within <= 0.0:
        return np.inf if between > 0 else 0.0
    return between / within


def fit_lda_split(train, seed=0):
    """One Fisher direction per contiguous feature half; two output dims.

    The first half gets the extra column when the feature count is odd.
    """
    x = np.asarray(train.features, dtype=np.float64)
    labels = np.asarray(train.labels)
    d = x.shape[1]
    if d < 2:
        raise DimRedError("split LDA needs at least two features")
    classes = np.unique(labels)
    if classes.size != 2:
        raise DegenerateClassesError("split LDA needs both classes present")
    mu_delta = x[labels == classes[1]].mean(axis=0) - x[labels == classes[0]].mean(axis=0)
    scale = max(np.linalg.norm(x.std(axis=0)), 1.0)
    if np.linalg.norm(mu_delta) < 1e-10 * scale:
        raise DegenerateClassesError(
            "class means coincide; between-class scatter is zero"
        )

    half = (d + 1) // 2
    slices = [slice(0, half), slice(half, d)]
    projection = np.zeros((d, 2))
    ratios = []
    degenerate_halves = []
    for j, sl in enumerate(slices):
        w, ratio = _fisher_direction(x[:, sl], labels)
        if w is None:
            w = np.zeros(sl.stop - sl.start)
            w[0] = 1.0
            ratio = 0.0
        projection[sl, j] = w
        ratios.append(float(ratio))
        if ratio < 1e-8:
            degenerate_halves.append(j)

    return Reducer(
        method="lda_split",
        mean=x.mean(axis=0),
        projection=_normalize_columns(projection),
        components=2,
        metadata={
            "fisher_ratios": ratios,
            "degenerate_halves": degenerate_halves,
            "half_split": half,
            "seed": seed,
        },
    )


def transform(reducer, x):
    """Project feature rows (or one vector) into the reduced space."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != reducer.projection.shape[0]:
        raise DimRedError(
            f"feature dimension {x.shape[1]} does not match reducer "
            f"({reducer.projection.shape[0]})"
        )
    out = (x - reducer.mean) @ reducer.projection
    return out[0] if single else out


def dump_reducer(reducer, path):
    """Plain-text key-value + matrix dump for reproducibility audits."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"method {reducer.method}\n")
        fh.write(f"components {reducer.components}\n")
        fh.write("mean " + " ".join(repr(float(v)) for v in reducer.mean) + "\n")
        rows, cols = reducer.projection.shape
        fh.write(f"projection {rows} {cols}\n")
        for row in reducer.projection:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_reducer(path):
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    method = lines[0].split(" ", 1)[1]
    components = int(lines[1].split(" ", 1)[1])
    mean = np.array([float(v) for v in lines[2].split()[1:]])
    rows, cols = (int(v) for v in lines[3].split()[1:])
    proj = np.array(
        [[float(v) for v in lines[4 + i].split()] for i in range(rows)]
    )
    assert proj.shape == (rows, cols)
    return Reducer(
        method=method, mean=mean, projection=proj, components=components
    )
