"""Exact statevector simulation: encodings, fidelity kernel, and the
variational classifier with parameter-shift training.

Qubit 0 is the leftmost ket symbol (most significant bit of the basis
index). Expectations are exact; there is no shot sampling.
"""

from dataclasses import dataclass, field

import numpy as np

from .backend import kernels
from .classical import SvmModel, train_svm


class QuantumError(ValueError):
    pass


SHIFT = np.pi / 2.0  # parameter-shift offset for half-turn generators


# ------------------------------------------------------------------- gates

@dataclass(frozen=True)
class Gate:
    kind: str  # RX | RY | RZ | H | PHASE | ROT | CNOT | CZ
    targets: tuple  # (target,) or (control, target)
    angles: tuple = ()

    def describe(self):
        ang = ",".join(f"{a:.12g}" for a in self.angles)
        tgt = ",".join(str(t) for t in self.targets)
        return f"{self.kind}({ang}) q[{tgt}]" if ang else f"{self.kind} q[{tgt}]"


def gate_matrix_1q(kind, angles=()):
    """2x2 unitary for a single-qubit gate kind."""
    if kind == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
    if kind == "PHASE":
        (phi,) = angles
        return np.array([[1, 0], [0, np.exp(1j * phi)]], dtype=complex)
    if kind == "RX":
        (t,) = angles
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        (t,) = angles
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        (t,) = angles
        return np.array(
            [[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex
        )
    if kind == "ROT":
        a, b, g = angles
        return (
            gate_matrix_1q("RZ", (g,))
            @ gate_matrix_1q("RY", (b,))
            @ gate_matrix_1q("RZ", (a,))
        )
    raise QuantumError(f"unknown single-qubit gate {kind!r}")


def zero_state(n_qubits, batch=1):
    states = np.zeros((batch, 1 << n_qubits), dtype=np.complex128)
    states[:, 0] = 1.0
    return states


def _check_qubits(gate, n_qubits):
    for q in gate.targets:
        if not 0 <= q < n_qubits:
            raise QuantumError(f"qubit index {q} out of range for {n_qubits} qubits")
    if len(gate.targets) == 2 and gate.targets[0] == gate.targets[1]:
        raise QuantumError("control and target must differ")


def apply_gate(state, gate):
    """Apply one gate to a single statevector; returns a new array."""
    state = np.ascontiguousarray(state, dtype=np.complex128)
    n_qubits = int(np.log2(state.size))
    if 1 << n_qubits != state.size:
        raise QuantumError(f"state length {state.size} is not a power of two")
    _check_qubits(gate, n_qubits)
    batch = state[None, :].copy()
    _apply_to_batch(batch, gate, n_qubits)
    out = batch[0]
    norm = np.sum(np.abs(out) ** 2)
    if abs(norm - 1.0) > 1e-10:
        raise QuantumError(f"gate application broke normalization ({norm})")
    return out


def _apply_to_batch(states, gate, n_qubits):
    if gate.kind == "CNOT":
        kernels.apply_cnot(states, gate.targets[0], gate.targets[1], n_qubits)
    elif gate.kind == "CZ":
        kernels.apply_cz(states, gate.targets[0], gate.targets[1], n_qubits)
    elif gate.kind == "PHASE":
        kernels.apply_phase(states, gate.angles[0], gate.targets[0], n_qubits)
    else:
        mat = np.ascontiguousarray(gate_matrix_1q(gate.kind, gate.angles))
        kernels.apply_1q(states, mat, gate.targets[0], n_qubits)


def run_circuit(gates, n_qubits, trace=None):
    """Run a gate list on |0...0>; optionally collect a plain-text trace."""
    states = zero_state(n_qubits)
    for gate in gates:
        _check_qubits(gate, n_qubits)
        _apply_to_batch(states, gate, n_qubits)
        if trace is not None:
            trace.append(gate.describe())
    return states[0]


def dump_trace(trace, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(trace) + "\n")


# --------------------------------------------------------------- encodings

@dataclass(frozen=True)
class FeatureMapSpec:
    kind: str  # angle | zz
    n_qubits: int
    reps: int = 2
    rotation_axis: str = "y"  # for the angle kind

    def __post_init__(self):
        if self.kind not in ("angle", "zz"):
            raise QuantumError(f"unknown feature map kind {self.kind!r}")
        if self.kind == "zz" and self.reps < 1:
            raise QuantumError("zz feature map needs reps >= 1")


def _check_feature_dim(x, spec):
    if x.shape[-1] != spec.n_qubits:
        raise QuantumError(
            f"feature dimension {x.shape[-1]} must equal n_qubits={spec.n_qubits}"
        )


def angle_gates(x, spec):
    kind = {"x": "RX", "y": "RY", "z": "RZ"}[spec.rotation_axis]
    return [Gate(kind, (i,), (float(xi),)) for i, xi in enumerate(x)]


def zz_gates(x, spec):
    n = spec.n_qubits
    gates = []
    for _ in range(spec.reps):
        gates.extend(Gate("H", (i,)) for i in range(n))
        gates.extend(Gate("PHASE", (i,), (2.0 * float(x[i]),)) for i in range(n))
        for i in range(n):
            for j in range(i + 1, n):
                phi = 2.0 * (np.pi - float(x[i])) * (np.pi - float(x[j]))
                gates.append(Gate("CNOT", (i, j)))
                gates.append(Gate("PHASE", (j,), (phi,)))
                gates.append(Gate("CNOT", (i, j)))
    return gates


def encode_angle(x, spec):
    x = np.asarray(x, dtype=np.float64)
    _check_feature_dim(x, spec)
    return run_circuit(angle_gates(x, spec), spec.n_qubits)


def encode_zz(x, spec):
    x = np.asarray(x, dtype=np.float64)
    _check_feature_dim(x, spec)
    return run_circuit(zz_gates(x, spec), spec.n_qubits)


def encode_angle_batch(x, spec):
    """Vectorized product-state construction for the angle encoding."""
    x = np.asarray(x, dtype=np.float64)
    _check_feature_dim(x, spec)
    if spec.rotation_axis != "y":
        return np.stack([encode_angle(row, spec) for row in x])
    b = x.shape[0]
    states = np.ones((b, 1), dtype=np.complex128)
    for i in range(spec.n_qubits):
        c = np.cos(x[:, i] / 2.0)
        s = np.sin(x[:, i] / 2.0)
        qubit = np.stack([c, s], axis=1).astype(np.complex128)
        states = (states[:, :, None] * qubit[:, None, :]).reshape(b, -1)
    return np.ascontiguousarray(states)


def encode_batch(x, spec):
    if spec.kind == "angle":
        return encode_angle_batch(x, spec)
    return np.stack([encode_zz(row, spec) for row in np.asarray(x, dtype=float)])


# ------------------------------------------------------------------ kernel

@dataclass
class KernelMatrix:
    gram: np.ndarray  # fidelities in [0, 1]


def quantum_kernel(xs_a, xs_b, spec):
    """Gram matrix of squared state overlaps |<phi(a)|phi(b)>|^2."""
    xs_a = np.atleast_2d(np.asarray(xs_a, dtype=np.float64))
    xs_b = np.atleast_2d(np.asarray(xs_b, dtype=np.float64))
    _check_feature_dim(xs_a, spec)
    _check_feature_dim(xs_b, spec)
    sa = encode_batch(xs_a, spec)
    sb = encode_batch(xs_b, spec)
    overlaps = sa @ sb.conj().T
    return KernelMatrix(gram=np.abs(overlaps) ** 2)


# ------------------------------------------------------------- angle scale

@dataclass
class AngleScaler:
    """Per-dimension min-max map onto [0, pi]; out-of-range values clip."""

    lo: np.ndarray
    span: np.ndarray  # zero spans map everything to pi/2

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        safe = np.where(self.span > 0, self.span, 1.0)
        scaled = np.clip((x - self.lo) / safe, 0.0, 1.0) * np.pi
        scaled[..., self.span == 0] = np.pi / 2.0
        return scaled


def fit_angle_scaler(x):
    x = np.asarray(x, dtype=np.float64)
    lo = x.min(axis=0)
    span = x.max(axis=0) - lo
    span = np.where(span > 1e-12, span, 0.0)
    return AngleScaler(lo=lo, span=span)


# -------------------------------------------------------------------- qsvc

@dataclass
class QsvcModel:
    spec: FeatureMapSpec
    train_x: np.ndarray  # encoded-angle training inputs
    svm: SvmModel

    def predict(self, x):
        rows = quantum_kernel(x, self.train_x, self.spec).gram
        return self.svm.predict(rows)


def train_qsvc(x, y, spec, c=1.0):
    """Kernel SVM on the quantum fidelity Gram (inputs already angle-scaled)."""
    x = np.asarray(x, dtype=np.float64)
    gram = quantum_kernel(x, x, spec).gram
    gram = (gram + gram.T) / 2.0
    svm = train_svm(None, y, c=c, kernel="precomputed", gram=gram)
    return QsvcModel(spec=spec, train_x=x.copy(), svm=svm)


# --------------------------------------------------------------------- vqc

@dataclass
class VqcModel:
    n_qubits: int
    n_layers: int
    weights: np.ndarray  # (layers, qubits, 3) radians
    encoding: FeatureMapSpec
    entangle: bool = True
    history: list = field(default_factory=list)

    def expectations(self, x):
        return vqc_expectations(self.weights, np.atleast_2d(x), self.encoding,
                                self.entangle)

    def predict(self, x):
        # sign(<Z0>): non-negative expectation maps to class 1
        return (self.expectations(x) >= 0.0).astype(np.int64)


def _apply_layers(states, weights, n_qubits, entangle):
    for layer in weights:
        for q in range(n_qubits):
            mat = np.ascontiguousarray(gate_matrix_1q("ROT", tuple(layer[q])))
            kernels.apply_1q(states, mat, q, n_qubits)
        if entangle and n_qubits > 1:
            for q in range(n_qubits):
                kernels.apply_cnot(states, q, (q + 1) % n_qubits, n_qubits)


def _z0_signs(n_qubits):
    idx = np.arange(1 << n_qubits)
    return np.where(idx >> (n_qubits - 1) & 1, -1.0, 1.0)


def vqc_expectations(weights, x, spec, entangle=True):
    """<Z_0> of each encoded input run through the entangling layers."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    _check_feature_dim(x, spec)
    states = encode_batch(x, spec)
    n_qubits = spec.n_qubits
    _apply_layers(states, np.asarray(weights), n_qubits, entangle)
    return (np.abs(states) ** 2) @ _z0_signs(n_qubits)


def vqc_forward(model, x):
    return float(model.expectations(np.atleast_2d(x))[0])


def square_loss(expectations, targets_signed):
    return float(np.mean((expectations - targets_signed) ** 2))


def vqc_gradient(model, x, y):
    """Parameter-shift gradient of the mean square loss over the batch.

    y holds {0, 1} labels; targets are mapped to {-1, +1}.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[0] == 0:
        raise QuantumError("empty batch")
    t = np.where(np.asarray(y) == 1, 1.0, -1.0)
    w = np.asarray(model.weights, dtype=np.float64)
    e = vqc_expectations(w, x, model.encoding, model.entangle)
    resid = 2.0 * (e - t)
    grad = np.zeros_like(w)
    flat = w.ravel()
    gflat = grad.ravel()
    for p in range(flat.size):
        orig = flat[p]
        flat[p] = orig + SHIFT
        e_plus = vqc_expectations(w, x, model.encoding, model.entangle)
        flat[p] = orig - SHIFT
        e_minus = vqc_expectations(w, x, model.encoding, model.entangle)
        flat[p] = orig
        de = (e_plus - e_minus) / 2.0
        gflat[p] = np.mean(resid * de)
    return grad


def init_vqc(n_qubits, n_layers, seed, spec=None, entangle=True):
    rng = np.random.default_rng(seed)
    weights = rng.uniform(0.0, 2.0 * np.pi, size=(n_layers, n_qubits, 3))
    if spec is None:
        spec = FeatureMapSpec(kind="angle", n_qubits=n_qubits)
    return VqcModel(
        n_qubits=n_qubits,
        n_layers=n_layers,
        weights=weights,
        encoding=spec,
        entangle=entangle,
    )


def train_vqc(x, y, n_layers=4, epochs=200, lr=0.3, seed=0, entangle=True,
              lr_halving=True):
    """Full-batch gradient descent on the square loss; keeps the best weights."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64)
    if np.unique(y).size != 2:
        raise QuantumError("training data must contain both classes")
    n_qubits = x.shape[1]
    model = init_vqc(n_qubits, n_layers, seed, entangle=entangle)
    t = np.where(y == 1, 1.0, -1.0)

    loss = square_loss(model.expectations(x), t)
    best_w = model.weights.copy()
    best_loss = loss
    model.history.append(loss)
    step = lr
    for _ in range(epochs):
        grad = vqc_gradient(model, x, y)
        stalled = False
        while True:
            w_new = model.weights - step * grad
            e_new = vqc_expectations(w_new, x, model.encoding, model.entangle)
            loss_new = square_loss(e_new, t)
            if not np.isfinite(loss_new):
                raise QuantumError("non-finite training loss")
            if not lr_halving or loss_new <= loss + 1e-15:
                break
            step *= 0.5
            if step < 1e-8:
                stalled = True
                break
        if stalled:
            break
        model.weights = w_new
        loss = loss_new
        model.history.append(loss)
        if loss < best_loss:
            best_loss = loss
            best_w = model.weights.copy()
        if lr_halving:
            step = min(step * 1.1, lr)
    model.weights = best_w
    return model
