"""Dense real symmetric eigendecomposition and thin SVD.

Both are built on cyclic Jacobi rotations (compiled kernel when available).
Matrices are plain 2-D float64 numpy arrays. Outputs are deterministic: the
largest-magnitude entry of every eigen/singular vector is made positive.
"""

from dataclasses import dataclass

import numpy as np

from .backend import kernels

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 100


class LinalgError(ValueError):
    pass


class ConvergenceError(LinalgError):
    def __init__(self, msg, sweeps):
        super().__init__(f"{msg} (after {sweeps} sweeps)")
        self.sweeps = sweeps


@dataclass
class EigenDecomposition:
    eigenvalues: np.ndarray  # sorted descending
    eigenvectors: np.ndarray  # unit-norm columns, paired with eigenvalues


@dataclass
class SvdDecomposition:
    u: np.ndarray
    singular_values: np.ndarray  # non-negative, non-increasing
    vt: np.ndarray


def _check_finite(a):
    if not np.all(np.isfinite(a)):
        raise LinalgError("matrix contains NaN/Inf entries")


def _fix_signs(vectors):
    """Make the largest-magnitude entry of each column positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eig_symmetric(a, tol=DEFAULT_TOL):
    """All eigenpairs of a symmetric matrix, eigenvalues sorted descending."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {a.shape}")
    _check_finite(a)
    scale = np.linalg.norm(a)
    asym = np.max(np.abs(a - a.T))
    if asym > 1e-10 * max(scale, 1.0):
        raise LinalgError(f"matrix is not symmetric (max asymmetry {asym:.3e})")

    w, v, sweeps, converged = kernels.jacobi_eigh(a, tol, MAX_SWEEPS)
    if not converged:
        raise ConvergenceError("Jacobi iteration did not converge", sweeps)

    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(w[order], _fix_signs(v[:, order]))


def svd(a, tol=DEFAULT_TOL):
    """Thin SVD of a real matrix via eigendecomposition of the small Gram side."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise LinalgError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    _check_finite(a)
    m, n = a.shape

    if n <= m:
        gram = a.T @ a
        eig = eig_symmetric((gram + gram.T) / 2.0, tol)
        v = eig.eigenvectors
        s = np.sqrt(np.clip(eig.eigenvalues, 0.0, None))
        u = _left_factor(a, v, s)
        return SvdDecomposition(u, s, v.T)

    # wide matrix: decompose A*A^T for U, recover V columns
    gram = a @ a.T
    eig = eig_symmetric((gram + gram.T) / 2.0, tol)
    u = eig.eigenvectors
    s = np.sqrt(np.clip(eig.eigenvalues, 0.0, None))
    v = _left_factor(a.T, u, s)
    return SvdDecomposition(u, s, v.T)


def _left_factor(a, v, s):
    """Columns u_i = A v_i / s_i, with orthonormal completion for tiny s_i."""
    m = a.shape[0]
    k = v.shape[1]
    u = np.zeros((m, k))
    # Gram eigenvalues carry ~eps*s0^2 noise, so anything below ~sqrt(eps)*s0
    # is numerically zero; dividing by it would yield non-orthogonal columns
    cutoff = max(s[0] if k else 0.0, 1.0) * 1e-7
    filled = []
    for i in range(k):
        if s[i] > cutoff:
            u[:, i] = (a @ v[:, i]) / s[i]
            filled.append(i)
    basis = [u[:, i] for i in filled]
    rng = np.random.default_rng(0)  # deterministic completion
    for i in range(k):
        if s[i] > cutoff:
            continue
        vec = np.zeros(m)
        tries = 0
        while np.linalg.norm(vec) < 1e-6:
            cand = np.zeros(m)
            if tries < m:
                cand[tries] = 1.0
            else:
                cand = rng.standard_normal(m)
            for b in basis:
                cand = cand - (b @ cand) * b
            vec = cand
            tries += 1
        vec /= np.linalg.norm(vec)
        u[:, i] = vec
        basis.append(vec)
    # sign convention lives on the eigenvector factor; flipping U columns
    # independently would break the U*S*V^T pairing
    return u
