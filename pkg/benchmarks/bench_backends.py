"""Timing comparison of the compiled kernel extension and the numpy fallback.

Times the three hot paths — batched gate application, fidelity Gram
construction, and the Jacobi eigensolver — through each available backend
and prints a small table with speedups.

Run from the repository root:

    python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from qdrbench.backend import available_backends, get_backend


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_gate_batch(kernels, n_qubits=8, batch=256, n_gates=40):
    rng = np.random.default_rng(0)
    states = np.zeros((batch, 1 << n_qubits), dtype=np.complex128)
    states[:, 0] = 1.0
    gates = []
    for _ in range(n_gates):
        theta = rng.uniform(0, 2 * np.pi)
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        mat = np.array([[c, -s], [s, c]], dtype=np.complex128)
        gates.append((mat, int(rng.integers(n_qubits))))

    def run():
        work = states.copy()
        for mat, q in gates:
            kernels.apply_1q(work, mat, q, n_qubits)
        for q in range(n_qubits):
            kernels.apply_cnot(work, q, (q + 1) % n_qubits, n_qubits)

    return _time(run)


def bench_gram(n_rows=200):
    from qdrbench.quantum import FeatureMapSpec, quantum_kernel

    x = np.random.default_rng(1).uniform(0, np.pi, (n_rows, 2))
    spec = FeatureMapSpec(kind="zz", n_qubits=2, reps=2)
    return _time(lambda: quantum_kernel(x, x, spec), repeats=3)


def bench_jacobi(kernels, n=80):
    rng = np.random.default_rng(2)
    base = rng.standard_normal((n, n))
    sym = (base + base.T) / 2.0
    return _time(lambda: kernels.jacobi_eigh(sym, 1e-12, 100), repeats=3)


def main():
    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    rows = []
    for name in backends:
        kernels = get_backend(name)
        rows.append(
            (
                name,
                bench_gate_batch(kernels),
                bench_jacobi(kernels),
            )
        )
    gram = bench_gram()  # uses the selected default backend

    print(f"\n{'backend':<10} {'gate batch (s)':>15} {'jacobi 80x80 (s)':>17}")
    for name, gate_s, jac_s in rows:
        print(f"{name:<10} {gate_s:>15.4f} {jac_s:>17.4f}")
    if len(rows) == 2:
        print(
            f"{'speedup':<10} {rows[1][1] / rows[0][1]:>14.1f}x "
            f"{rows[1][2] / rows[0][2]:>16.1f}x"
        )
    print(f"\nzz-kernel 200x200 Gram via default backend: {gram:.4f} s")


if __name__ == "__main__":
    main()
