"""Pure-numpy fallback for the hot kernels (statevector gates, Jacobi sweeps).

Same call signatures as the compiled ``_fastkern`` extension; the active
implementation is chosen in :mod:`qdrbench.backend`. Gate functions mutate
``states`` in place, where ``states`` is a C-contiguous complex128 array of
shape (batch, 2**n_qubits). Qubit 0 is the leftmost ket symbol, i.e. the most
significant bit of the basis index.
"""

import numpy as np

NAME = "pure"


def _as_axes(states, n_qubits):
    return states.reshape((states.shape[0],) + (2,) * n_qubits)


def apply_1q(states, mat, qubit, n_qubits):
    """Apply a 2x2 unitary to one qubit of every state in the batch."""
    s = _as_axes(states, n_qubits)
    sl0 = (slice(None),) * (qubit + 1) + (0,)
    sl1 = (slice(None),) * (qubit + 1) + (1,)
    a0 = s[sl0].copy()
    a1 = s[sl1].copy()
    s[sl0] = mat[0, 0] * a0 + mat[0, 1] * a1
    s[sl1] = mat[1, 0] * a0 + mat[1, 1] * a1


def apply_cnot(states, control, target, n_qubits):
    s = _as_axes(states, n_qubits)
    idx = (slice(None),) * (control + 1) + (1,)
    sub = s[idx]
    # fixing the control axis shifts later axes down by one
    tax = target if target > control else target + 1
    sub[...] = np.flip(sub, axis=tax)


def apply_cz(states, q1, q2, n_qubits):
    s = _as_axes(states, n_qubits)
    a, b = sorted((q1, q2))
    idx = [slice(None)] * (n_qubits + 1)
    idx[a + 1] = 1
    idx[b + 1] = 1
    s[tuple(idx)] *= -1.0


def apply_phase(states, phi, qubit, n_qubits):
    s = _as_axes(states, n_qubits)
    idx = (slice(None),) * (qubit + 1) + (1,)
    s[idx] *= np.exp(1j * phi)


def jacobi_eigh(a, tol, max_sweeps):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns (eigenvalues, eigenvector matrix, sweeps used, converged flag);
    eigenvalues unsorted, eigenvectors in matching columns.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0 or n == 1:
        return np.diag(a).copy(), v, 0, True

    off_mask = ~np.eye(n, dtype=bool)

    def _offdiag():
        # summed directly; subtracting the diagonal from the total cancels
        # catastrophically once the matrix is nearly diagonal
        return np.sqrt(np.sum(a[off_mask] ** 2))

    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        if _offdiag() <= tol * scale:
            converged = True
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-36 * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    if not converged:
        converged = _offdiag() <= tol * scale

    return np.diag(a).copy(), v, sweeps, converged
