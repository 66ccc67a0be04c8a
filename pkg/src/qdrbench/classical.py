"""Baseline classifiers: logistic regression, KNN, CART, Gaussian NB, and a
soft-margin SVM solved by a maximal-violating-pair SMO (linear, RBF, or
precomputed Gram).

Labels are {0, 1} everywhere; the SVM maps them to {-1, +1} internally.
"""

from dataclasses import dataclass, field

import numpy as np


class ModelError(ValueError):
    pass


class SmoConvergenceError(ModelError):
    pass


def _check_two_classes(y):
    if np.unique(y).size != 2:
        raise ModelError("training data must contain both classes")


def _check_dim(model_dim, x):
    if x.shape[-1] != model_dim:
        raise ModelError(
            f"feature dimension {x.shape[-1]} does not match "
            f"training dimension {model_dim}"
        )


# ---------------------------------------------------------------- logistic

@dataclass
class LogisticModel:
    coef: np.ndarray  # (n_features,)
    intercept: float
    n_iter: int
    loss: float

    def decision(self, x):
        x = np.asarray(x, dtype=np.float64)
        _check_dim(self.coef.size, x)
        return x @ self.coef + self.intercept

    def predict_proba(self, x):
        return _sigmoid(self.decision(x))

    def predict(self, x):
        # decision threshold fixed at probability 0.5
        return (self.predict_proba(x) >= 0.5).astype(np.int64)


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _log_loss(p, y):
    eps = 1e-15
    p = np.clip(p, eps, 1.0 - eps)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1.0 - p)))


def train_logistic(x, y, max_iter=1000, lr=0.1):
    """Gradient descent on mean log-loss with step halving on regressions."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape[0] < 2:
        raise ModelError("need at least two samples")
    _check_two_classes(y)
    n, d = x.shape
    w = np.zeros(d)
    # start the intercept at the base-rate log-odds (the zero-coefficient MLE)
    # so the shared step size does not have to carry it there
    pbar = float(np.clip(y.mean(), 1e-12, 1.0 - 1e-12))
    b = float(np.log(pbar / (1.0 - pbar)))
    p = _sigmoid(x @ w + b)
    loss = _log_loss(p, y)
    it = 0
    for it in range(1, max_iter + 1):
        err = p - y
        gw = x.T @ err / n
        gb = float(err.mean())
        while True:
            w_new = w - lr * gw
            b_new = b - lr * gb
            p_new = _sigmoid(x @ w_new + b_new)
            loss_new = _log_loss(p_new, y)
            if np.isfinite(loss_new) and loss_new <= loss + 1e-15:
                break
            lr *= 0.5
            if lr < 1e-12:
                raise ModelError(
                    f"logistic loss stopped improving at iteration {it}"
                )
        w, b, p, loss = w_new, b_new, p_new, loss_new
        if np.linalg.norm(gw) + abs(gb) < 1e-7:
            break
    return LogisticModel(coef=w, intercept=b, n_iter=it, loss=loss)


# --------------------------------------------------------------------- knn

@dataclass
class KnnModel:
    x: np.ndarray
    y: np.ndarray
    k: int

    def predict(self, queries):
        queries = np.asarray(queries, dtype=np.float64)
        _check_dim(self.x.shape[1], queries)
        if queries.ndim == 1:
            queries = queries[None, :]
        out = np.empty(queries.shape[0], dtype=np.int64)
        for i, q in enumerate(queries):
            d2 = np.sum((self.x - q) ** 2, axis=1)
            # stable sort: distance ties resolved by training index
            nearest = np.argsort(d2, kind="stable")[: self.k]
            votes = int(np.sum(self.y[nearest]))
            # majority vote, exact ties toward class 0
            out[i] = 1 if 2 * votes > self.k else 0
        return out


def train_knn(x, y, k=7):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if k <= 0:
        raise ModelError(f"k must be positive, got {k}")
    if k > x.shape[0]:
        raise ModelError(f"k={k} exceeds the training size {x.shape[0]}")
    return KnnModel(x=x, y=y, k=k)


# -------------------------------------------------------------------- cart

@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    prob: float = 0.0  # leaf probability of class 1

    @property
    def is_leaf(self):
        return self.left is None


def _impurity(counts, total, criterion):
    if total == 0:
        return 0.0
    p = counts / total
    if criterion == "gini":
        return 1.0 - np.sum(p * p)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def _best_split(x, y, criterion):
    n = y.size
    counts_all = np.array([np.sum(y == 0), np.sum(y == 1)], dtype=float)
    parent = _impurity(counts_all, n, criterion)
    # zero-gain splits of an impure node are still taken (XOR-style data has
    # no first split with positive gain); recursion shrinks the node either way
    best = (-1.0, -1, 0.0)  # (gain, feature, threshold)
    for f in range(x.shape[1]):
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        ys = y[order]
        ones = np.cumsum(ys)
        total_ones = ones[-1]
        for i in range(n - 1):
            if xs[i + 1] <= xs[i]:
                continue
            nl = i + 1
            nr = n - nl
            cl = np.array([nl - ones[i], ones[i]], dtype=float)
            cr = np.array(
                [nr - (total_ones - ones[i]), total_ones - ones[i]], dtype=float
            )
            gain = parent - (
                nl / n * _impurity(cl, nl, criterion)
                + nr / n * _impurity(cr, nr, criterion)
            )
            if gain > best[0] + 1e-15:
                best = (gain, f, 0.5 * (xs[i] + xs[i + 1]))
    return best


def _grow(x, y, criterion, max_depth, depth):
    node = TreeNode(prob=float(np.mean(y)))
    if y.size == 0 or np.all(y == y[0]):
        return node
    if max_depth is not None and depth >= max_depth:
        return node
    gain, f, t = _best_split(x, y, criterion)
    if f < 0 or gain < -1e-12:
        return node
    mask = x[:, f] <= t
    node.feature = f
    node.threshold = t
    node.left = _grow(x[mask], y[mask], criterion, max_depth, depth + 1)
    node.right = _grow(x[~mask], y[~mask], criterion, max_depth, depth + 1)
    return node


@dataclass
class CartModel:
    root: TreeNode
    n_features: int
    criterion: str

    def predict_proba(self, x):
        x = np.asarray(x, dtype=np.float64)
        _check_dim(self.n_features, x)
        if x.ndim == 1:
            x = x[None, :]
        out = np.empty(x.shape[0])
        for i, row in enumerate(x):
            node = self.root
            while not node.is_leaf:
                node = node.left if row[node.feature] <= node.threshold else node.right
            out[i] = node.prob
        return out

    def predict(self, x):
        return (self.predict_proba(x) >= 0.5).astype(np.int64)


def train_cart(x, y, criterion="gini", max_depth=None):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if x.shape[0] == 0:
        raise ModelError("empty training set")
    if criterion not in ("gini", "entropy"):
        raise ModelError(f"unknown criterion {criterion!r}")
    root = _grow(x, y, criterion, max_depth, 0)
    return CartModel(root=root, n_features=x.shape[1], criterion=criterion)


# ---------------------------------------------------------------------- nb

@dataclass
class NaiveBayesModel:
    means: np.ndarray  # (2, n_features)
    variances: np.ndarray  # (2, n_features), floored
    log_priors: np.ndarray  # (2,)

    def log_posterior(self, x):
        x = np.asarray(x, dtype=np.float64)
        _check_dim(self.means.shape[1], x)
        if x.ndim == 1:
            x = x[None, :]
        out = np.empty((x.shape[0], 2))
        for c in range(2):
            diff = x - self.means[c]
            out[:, c] = self.log_priors[c] - 0.5 * np.sum(
                np.log(2.0 * np.pi * self.variances[c])
                + diff * diff / self.variances[c],
                axis=1,
            )
        return out

    def predict(self, x):
        lp = self.log_posterior(x)
        # exact posterior ties go to class 0
        return (lp[:, 1] > lp[:, 0]).astype(np.int64)


def train_nb(x, y, var_floor=1e-9):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    _check_two_classes(y)
    means = np.stack([x[y == c].mean(axis=0) for c in (0, 1)])
    variances = np.stack(
        [np.maximum(x[y == c].var(axis=0), var_floor) for c in (0, 1)]
    )
    priors = np.array([np.mean(y == 0), np.mean(y == 1)])
    return NaiveBayesModel(
        means=means, variances=variances, log_priors=np.log(priors)
    )


# --------------------------------------------------------------------- svm

@dataclass
class SvmModel:
    kernel: str  # linear | rbf | precomputed
    gamma: float
    c: float
    x: np.ndarray | None  # training inputs (None for precomputed)
    y_signed: np.ndarray  # (n,) in {-1, +1}
    alpha: np.ndarray
    bias: float
    objective: float
    n_iter: int
    support_indices: np.ndarray = field(default_factory=lambda: np.empty(0, int))

    def decision_function(self, x_or_gram):
        coeff = self.alpha * self.y_signed
        if self.kernel == "precomputed":
            gram = np.asarray(x_or_gram, dtype=np.float64)
            if gram.ndim == 1:
                gram = gram[None, :]
            if gram.shape[1] != self.y_signed.size:
                raise ModelError(
                    "precomputed rows must have one column per training sample"
                )
            return gram @ coeff + self.bias
        x = np.asarray(x_or_gram, dtype=np.float64)
        _check_dim(self.x.shape[1], x)
        if x.ndim == 1:
            x = x[None, :]
        gram = _kernel_matrix(x, self.x, self.kernel, self.gamma)
        return gram @ coeff + self.bias

    def predict(self, x_or_gram):
        return (self.decision_function(x_or_gram) >= 0).astype(np.int64)


def _kernel_matrix(a, b, kernel, gamma):
    if kernel == "linear":
        return a @ b.T
    if kernel == "rbf":
        d2 = (
            np.sum(a * a, axis=1)[:, None]
            + np.sum(b * b, axis=1)[None, :]
            - 2.0 * a @ b.T
        )
        return np.exp(-gamma * np.clip(d2, 0.0, None))
    raise ModelError(f"unknown kernel {kernel!r}")


def check_psd(gram, shift=1e-8):
    """Cholesky-style PSD check of a symmetric Gram matrix."""
    gram = np.asarray(gram, dtype=np.float64)
    sym = (gram + gram.T) / 2.0
    try:
        np.linalg.cholesky(sym + shift * np.eye(sym.shape[0]))
    except np.linalg.LinAlgError as exc:
        raise ModelError("precomputed kernel matrix is not PSD") from exc


def smo_solve(gram, y_signed, c, tol=1e-3, max_iter=100_000):
    """Maximal-violating-pair SMO for the soft-margin SVM dual.

    Minimizes 0.5 a^T Q a - e^T a with Q_ij = y_i y_j K_ij subject to
    0 <= a_i <= C and y^T a = 0. Returns (alpha, bias, objective, iterations).
    """
    n = y_signed.size
    q = gram * np.outer(y_signed, y_signed)
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of the dual objective at alpha = 0
    it = 0
    for it in range(1, max_iter + 1):
        yg = -y_signed * grad
        up = (y_signed > 0) & (alpha < c) | (y_signed < 0) & (alpha > 0)
        low = (y_signed > 0) & (alpha > 0) | (y_signed < 0) & (alpha < c)
        if not up.any() or not low.any():
            break
        i = np.flatnonzero(up)[np.argmax(yg[up])]
        j = np.flatnonzero(low)[np.argmin(yg[low])]
        if yg[i] - yg[j] <= tol:
            break
        # analytic pair update with box clipping
        quad = q[i, i] + q[j, j] - 2.0 * y_signed[i] * y_signed[j] * q[i, j]
        quad = max(quad, 1e-12)
        delta = (yg[i] - yg[j]) / quad
        ai_old, aj_old = alpha[i], alpha[j]
        if y_signed[i] > 0:
            max_di = c - ai_old
        else:
            max_di = ai_old
        if y_signed[j] > 0:
            max_dj = aj_old
        else:
            max_dj = c - aj_old
        delta = min(delta, max_di, max_dj)
        # signed step: alpha_i moves along +y_i, alpha_j along -y_j
        alpha[i] = ai_old + (delta if y_signed[i] > 0 else -delta)
        alpha[j] = aj_old - (delta if y_signed[j] > 0 else -delta)
        grad += q[:, i] * (alpha[i] - ai_old) + q[:, j] * (alpha[j] - aj_old)
    else:
        raise SmoConvergenceError(
            f"SMO did not reach tolerance {tol} within {max_iter} iterations"
        )

    free = (alpha > 1e-12) & (alpha < c - 1e-12)
    yg = -y_signed * grad
    if free.any():
        bias = float(np.mean(yg[free]))
    else:
        up = (y_signed > 0) & (alpha < c) | (y_signed < 0) & (alpha > 0)
        low = (y_signed > 0) & (alpha > 0) | (y_signed < 0) & (alpha < c)
        hi = yg[up].max() if up.any() else 0.0
        lo = yg[low].min() if low.any() else 0.0
        bias = float((hi + lo) / 2.0)
    objective = float(0.5 * alpha @ q @ alpha - alpha.sum())
    return alpha, bias, objective, it


def train_svm(x, y, c=1.0, kernel="rbf", gamma=None, gram=None,
              tol=1e-3, max_iter=100_000):
    """Soft-margin SVM; pass kernel='precomputed' with a PSD Gram matrix."""
    y = np.asarray(y, dtype=np.int64)
    _check_two_classes(y)
    y_signed = np.where(y == 1, 1.0, -1.0)

    if kernel == "precomputed":
        if gram is None:
            raise ModelError("precomputed kernel requires a Gram matrix")
        gram = np.asarray(gram, dtype=np.float64)
        if gram.shape != (y.size, y.size):
            raise ModelError("Gram matrix shape must be (n_train, n_train)")
        check_psd(gram)
        x_store = None
        gamma_val = 0.0
    else:
        x = np.asarray(x, dtype=np.float64)
        if gamma is None:
            var = float(x.var())
            gamma_val = 1.0 / (x.shape[1] * var) if var > 0 else 1.0
        else:
            gamma_val = gamma
        gram = _kernel_matrix(x, x, kernel, gamma_val)
        x_store = x

    alpha, bias, objective, n_iter = smo_solve(
        gram, y_signed, c, tol=tol, max_iter=max_iter
    )
    support = np.flatnonzero(alpha > 1e-12)
    return SvmModel(
        kernel=kernel,
        gamma=gamma_val,
        c=c,
        x=x_store,
        y_signed=y_signed,
        alpha=alpha,
        bias=bias,
        objective=objective,
        n_iter=n_iter,
        support_indices=support,
    )
