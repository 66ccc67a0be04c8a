# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: statevector gate application and Jacobi sweeps.

Mirrors the signatures of qdrbench._purekern; the active backend is chosen
at import time in qdrbench.backend. States are (batch, 2**n) complex128
arrays, qubit 0 is the most significant bit of the basis index.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

NAME = "compiled"


def apply_1q(cnp.complex128_t[:, ::1] states, cnp.complex128_t[:, ::1] mat,
             int qubit, int n_qubits):
    cdef Py_ssize_t batch = states.shape[0]
    cdef Py_ssize_t dim = states.shape[1]
    cdef Py_ssize_t bit = 1 << (n_qubits - 1 - qubit)
    cdef Py_ssize_t b, i, i1
    cdef double complex m00 = mat[0, 0], m01 = mat[0, 1]
    cdef double complex m10 = mat[1, 0], m11 = mat[1, 1]
    cdef double complex a0, a1
    for b in range(batch):
        for i in range(dim):
            if i & bit:
                continue
            i1 = i | bit
            a0 = states[b, i]
            a1 = states[b, i1]
            states[b, i] = m00 * a0 + m01 * a1
            states[b, i1] = m10 * a0 + m11 * a1


def apply_cnot(cnp.complex128_t[:, ::1] states, int control, int target,
               int n_qubits):
    cdef Py_ssize_t batch = states.shape[0]
    cdef Py_ssize_t dim = states.shape[1]
    cdef Py_ssize_t cbit = 1 << (n_qubits - 1 - control)
    cdef Py_ssize_t tbit = 1 << (n_qubits - 1 - target)
    cdef Py_ssize_t b, i
    cdef double complex tmp
    for b in range(batch):
        for i in range(dim):
            if (i & cbit) and not (i & tbit):
                tmp = states[b, i]
                states[b, i] = states[b, i | tbit]
                states[b, i | tbit] = tmp


def apply_cz(cnp.complex128_t[:, ::1] states, int q1, int q2, int n_qubits):
    cdef Py_ssize_t batch = states.shape[0]
    cdef Py_ssize_t dim = states.shape[1]
    cdef Py_ssize_t mask = (1 << (n_qubits - 1 - q1)) | (1 << (n_qubits - 1 - q2))
    cdef Py_ssize_t b, i
    for b in range(batch):
        for i in range(dim):
            if (i & mask) == mask:
                states[b, i] = -states[b, i]


def apply_phase(cnp.complex128_t[:, ::1] states, double phi, int qubit,
                int n_qubits):
    cdef Py_ssize_t batch = states.shape[0]
    cdef Py_ssize_t dim = states.shape[1]
    cdef Py_ssize_t bit = 1 << (n_qubits - 1 - qubit)
    cdef Py_ssize_t b, i
    cdef double complex ph = np.exp(1j * phi)
    for b in range(batch):
        for i in range(dim):
            if i & bit:
                states[b, i] = ph * states[b, i]


def jacobi_eigh(object a_in, double tol, int max_sweeps):
    """Cyclic Jacobi eigendecomposition; returns (w, v, sweeps, converged)."""
    a_arr = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a_arr.shape[0]
    v_arr = np.eye(n)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] v = v_arr

    cdef double scale = 0.0
    cdef Py_ssize_t i, j, p, q
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    scale = sqrt(scale)
    if scale == 0.0 or n == 1:
        return np.diag(a_arr).copy(), v_arr, 0, True

    cdef double off, apq, theta, t, c, s, tmp_p, tmp_q
    cdef int sweeps = 0
    cdef bint converged = False
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        off = sqrt(off)
        if off <= tol * scale:
            converged = True
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if fabs(apq) <= 1e-36 * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c

                for i in range(n):
                    tmp_p = a[i, p]
                    tmp_q = a[i, q]
                    a[i, p] = c * tmp_p - s * tmp_q
                    a[i, q] = s * tmp_p + c * tmp_q
                for i in range(n):
                    tmp_p = a[p, i]
                    tmp_q = a[q, i]
                    a[p, i] = c * tmp_p - s * tmp_q
                    a[q, i] = s * tmp_p + c * tmp_q
                a[p, q] = 0.0
                a[q, p] = 0.0

                for i in range(n):
                    tmp_p = v[i, p]
                    tmp_q = v[i, q]
                    v[i, p] = c * tmp_p - s * tmp_q
                    v[i, q] = s * tmp_p + c * tmp_q
    if not converged:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        converged = sqrt(off) <= tol * scale

    return np.diag(a_arr).copy(), v_arr, sweeps, converged
