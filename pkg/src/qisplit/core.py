"""Exact state-vector engine for a handful of labeled qubits.

Amplitude ordering: the first label is the most significant bit, so for
labels ``(a, b, c)`` the ket ``|abc>`` sits at index ``4a + 2b + c``.
All objects are immutable; every operation returns a new value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

CONSTRUCT_TOL = 1e-12
PROB_TOL = 1e-10
NULL_BRANCH = 1e-14
MAX_QUBITS = 4


class QuantumStateError(ValueError):
    """Raised when a state, operator or basis violates its invariants."""


def _as_complex(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if shape is not None and arr.shape != shape:
        raise QuantumStateError(f"expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise QuantumStateError("amplitudes must be finite")
    arr.setflags(write=False)
    return arr


def _check_labels(labels: Sequence[str]) -> tuple[str, ...]:
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise QuantumStateError(f"duplicate qubit labels in {labels}")
    if len(labels) > MAX_QUBITS:
        raise QuantumStateError(f"at most {MAX_QUBITS} qubits supported, got {len(labels)}")
    return labels


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state over labeled qubits.

    A state with no labels is a bare phase (length-1 amplitude vector); it is
    what remains after every qubit has been measured out.
    """

    labels: tuple[str, ...]
    amps: np.ndarray

    def __post_init__(self):
        labels = _check_labels(self.labels)
        amps = _as_complex(self.amps, (2 ** len(labels),))
        if abs(np.vdot(amps, amps).real - 1.0) > PROB_TOL:
            raise QuantumStateError("state vector is not normalized")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amps", amps)

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit."""
        return self.amps.reshape((2,) * self.num_qubits)

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other> (labels must match in order)."""
        if self.labels != other.labels:
            raise QuantumStateError(f"label mismatch {self.labels} vs {other.labels}")
        return complex(np.vdot(self.amps, other.amps))

    def __repr__(self):
        return f"StateVector(labels={self.labels}, amps={np.round(self.amps, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class Unitary:
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = _as_complex(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
            raise QuantumStateError(f"unitary must be 2x2 or 4x4, got {m.shape}")
        if not np.allclose(m @ m.conj().T, np.eye(m.shape[0]), rtol=0, atol=CONSTRUCT_TOL):
            raise QuantumStateError(f"matrix {self.name or ''} is not unitary")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "Unitary") -> "Unitary":
        return Unitary(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Measurement basis; ``vectors[k]`` is reported as ``outcome_labels[k]``."""

    vectors: tuple[np.ndarray, ...]
    outcome_labels: tuple[str, ...]

    def __post_init__(self):
        vecs = tuple(_as_complex(v) for v in self.vectors)
        labels = tuple(self.outcome_labels)
        dim = len(vecs)
        if dim not in (2, 4) or any(v.shape != (dim,) for v in vecs):
            raise QuantumStateError("basis must hold 2 or 4 vectors of matching dimension")
        if len(labels) != dim or len(set(labels)) != dim:
            raise QuantumStateError("need one distinct outcome label per basis vector")
        gram = np.array([[np.vdot(u, v) for v in vecs] for u in vecs])
        if not np.allclose(gram, np.eye(dim), rtol=0, atol=CONSTRUCT_TOL):
            raise QuantumStateError("basis vectors are not orthonormal")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "outcome_labels", labels)

    @property
    def dim(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True, eq=False)
class MeasurementBranch:
    """One outcome of a measurement.

    ``post_state`` is None when the outcome has (numerically) zero probability;
    ``probability`` is then exactly 0.
    """

    outcome_label: str
    probability: float
    post_state: StateVector | None
    raw_weight: float


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        m = _as_complex(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise QuantumStateError(f"density matrix must be square, got {m.shape}")
        if not np.allclose(m, m.conj().T, rtol=0, atol=CONSTRUCT_TOL):
            raise QuantumStateError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > PROB_TOL:
            raise QuantumStateError("density matrix trace is not 1")
        if np.linalg.eigvalsh(m).min() < -PROB_TOL:
            raise QuantumStateError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, num_qubits: int = 1) -> "DensityMatrix":
        d = 2 ** num_qubits
        return cls(np.eye(d) / d)

    @classmethod
    def from_pure(cls, state: StateVector) -> "DensityMatrix":
        return cls(np.outer(state.amps, state.amps.conj()), state.labels)


@dataclass(frozen=True, eq=False)
class KrausPair:
    """Two-outcome generalized measurement on a single qubit."""

    success_op: np.ndarray
    fail_op: np.ndarray

    def __post_init__(self):
        ks = _as_complex(self.success_op, (2, 2))
        kf = _as_complex(self.fail_op, (2, 2))
        total = ks.conj().T @ ks + kf.conj().T @ kf
        if not np.allclose(total, np.eye(2), rtol=0, atol=CONSTRUCT_TOL):
            raise QuantumStateError("Kraus pair is not complete")
        object.__setattr__(self, "success_op", ks)
        object.__setattr__(self, "fail_op", kf)

    @classmethod
    def from_success(cls, success_op) -> "KrausPair":
        """Complete a diagonal-or-general success operator with the minimal fail operator."""
        ks = np.array(success_op, dtype=complex)
        residual = np.eye(2) - ks.conj().T @ ks
        w, v = np.linalg.eigh(residual)
        if w.min() < -CONSTRUCT_TOL:
            raise QuantumStateError("success operator is not a contraction")
        kf = v @ np.diag(np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
        return cls(ks, kf)


def make_state(labels: Sequence[str], amps) -> StateVector:
    """Build a state from raw amplitudes, normalizing them."""
    labels = _check_labels(labels)
    arr = np.array(amps, dtype=complex).reshape(-1)
    if arr.shape != (2 ** len(labels),):
        raise QuantumStateError(
            f"{len(labels)} labels need {2 ** len(labels)} amplitudes, got {arr.size}"
        )
    if not np.all(np.isfinite(arr)):
        raise QuantumStateError("amplitudes must be finite")
    norm = np.linalg.norm(arr)
    if norm == 0:
        raise QuantumStateError("cannot normalize the zero vector")
    return StateVector(labels, arr / norm)


def basis_state(labels: Sequence[str], bits: str) -> StateVector:
    """Computational basis ket, e.g. ``basis_state("abc", "101")``."""
    labels = tuple(labels)
    if len(bits) != len(labels):
        raise QuantumStateError("one bit per label required")
    amps = np.zeros(2 ** len(labels), dtype=complex)
    amps[int(bits, 2) if bits else 0] = 1.0
    return StateVector(labels, amps)


def product_state(*states: StateVector) -> StateVector:
    """Tensor product, labels concatenated left to right."""
    labels: tuple[str, ...] = ()
    amps = np.ones(1, dtype=complex)
    for s in states:
        labels += s.labels
        amps = np.kron(amps, s.amps)
    return StateVector(labels, amps)


def relabel(state: StateVector, labels: Sequence[str]) -> StateVector:
    return StateVector(tuple(labels), state.amps)


def _axes(state: StateVector, targets: Sequence[str]) -> list[int]:
    targets = tuple(targets)
    if len(set(targets)) != len(targets):
        raise QuantumStateError(f"duplicate targets {targets}")
    missing = [t for t in targets if t not in state.labels]
    if missing:
        raise QuantumStateError(f"unknown qubit label(s) {missing}; state has {state.labels}")
    return [state.labels.index(t) for t in targets]


def _operator_matrix(u) -> np.ndarray:
    return u.matrix if isinstance(u, Unitary) else np.asarray(u, dtype=complex)


def _apply_matrix(state: StateVector, m: np.ndarray, targets: Sequence[str]) -> np.ndarray:
    """Return the (possibly unnormalized) amplitudes of ``m`` on ``targets``."""
    axes = _axes(state, targets)
    k = len(axes)
    if m.shape != (2 ** k, 2 ** k):
        raise QuantumStateError(f"operator of shape {m.shape} does not act on {k} qubit(s)")
    psi = state.tensor()
    op = m.reshape((2,) * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the operator's output axes first; move them back.
    rest = [i for i in range(state.num_qubits) if i not in axes]
    order = axes + rest
    out = np.moveaxis(out, list(range(state.num_qubits)), order)
    return out.reshape(-1)


def apply_unitary(state: StateVector, u: Unitary, targets: Sequence[str]) -> StateVector:
    """Apply ``u`` to the named qubits, identity elsewhere."""
    return StateVector(state.labels, _apply_matrix(state, _operator_matrix(u), targets))


def _split(state: StateVector, targets: Sequence[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    """Matrix view with target qubits as rows and the remaining qubits as columns."""
    axes = _axes(state, targets)
    rest = [i for i in range(state.num_qubits) if i not in axes]
    psi = np.transpose(state.tensor(), axes + rest)
    return psi.reshape(2 ** len(axes), 2 ** len(rest)), tuple(state.labels[i] for i in rest)


def _branch(label: str, vec: np.ndarray, labels: tuple[str, ...]) -> MeasurementBranch:
    weight = float(np.vdot(vec, vec).real)
    if weight < NULL_BRANCH:
        return MeasurementBranch(label, 0.0, None, weight)
    return MeasurementBranch(label, weight, StateVector(labels, vec / np.sqrt(weight)), weight)


def measure_in_basis(
    state: StateVector, basis: OrthonormalBasis, targets: Sequence[str]
) -> list[MeasurementBranch]:
    """Enumerate every outcome of a projective measurement on ``targets``.

    The measured qubits are removed from each post-measurement state. The
    post-state is ``<v_k|psi> / sqrt(p_k)`` with no phase fix-up, so
    ``sum_k sqrt(p_k) |v_k> (x) |post_k>`` reproduces the input exactly.
    """
    if basis.dim != 2 ** len(targets):
        raise QuantumStateError(
            f"basis of dimension {basis.dim} cannot measure {len(targets)} qubit(s)"
        )
    mat, rest = _split(state, targets)
    return [
        _branch(label, v.conj() @ mat, rest)
        for v, label in zip(basis.vectors, basis.outcome_labels)
    ]


def apply_kraus(state: StateVector, k: KrausPair, target: str) -> tuple[MeasurementBranch, MeasurementBranch]:
    """Success and failure branches of a filtering measurement on one qubit."""
    if not isinstance(k, KrausPair):
        raise QuantumStateError("apply_kraus needs a validated KrausPair")
    ok = _branch("success", _apply_matrix(state, k.success_op, [target]), state.labels)
    fail = _branch("fail", _apply_matrix(state, k.fail_op, [target]), state.labels)
    return ok, fail


def partial_trace(state: StateVector, keep: Sequence[str]) -> DensityMatrix:
    """Reduced density matrix on ``keep``, ordered as given."""
    keep = tuple(keep)
    if not keep:
        raise QuantumStateError("keep must name at least one qubit")
    mat, _ = _split(state, keep)
    return DensityMatrix(mat @ mat.conj().T, keep)


def partial_trace_dm(dm: DensityMatrix, keep: Sequence[str]) -> DensityMatrix:
    """Trace out qubits of a labeled density matrix."""
    keep = tuple(keep)
    if not keep:
        raise QuantumStateError("keep must name at least one qubit")
    labels = dm.labels
    missing = [k for k in keep if k not in labels]
    if missing:
        raise QuantumStateError(f"unknown qubit label(s) {missing}; matrix has {labels}")
    n = len(labels)
    keep_ax = [labels.index(k) for k in keep]
    drop_ax = [i for i in range(n) if i not in keep_ax]
    rho = dm.matrix.reshape((2,) * (2 * n))
    rho = np.transpose(rho, keep_ax + drop_ax + [n + i for i in keep_ax] + [n + i for i in drop_ax])
    dk, dd = 2 ** len(keep_ax), 2 ** len(drop_ax)
    rho = rho.reshape(dk, dd, dk, dd)
    return DensityMatrix(np.einsum("ijkj->ik", rho), keep)


def mixture(weighted: Sequence[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex combination of density matrices with the same labels."""
    total = sum(p * dm.matrix for p, dm in weighted)
    return DensityMatrix(total, weighted[0][1].labels)


def fidelity(dm: DensityMatrix, pure: StateVector) -> float:
    """<pure|dm|pure>, insensitive to the global phase of ``pure``."""
    if dm.dim != pure.amps.size:
        raise QuantumStateError(f"dimension mismatch {dm.dim} vs {pure.amps.size}")
    return float(np.vdot(pure.amps, dm.matrix @ pure.amps).real)


def state_fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 for two pure states on the same labels."""
    return abs(a.overlap(b)) ** 2


def trace_distance(d1: DensityMatrix, d2: DensityMatrix) -> float:
    if d1.dim != d2.dim:
        raise QuantumStateError(f"dimension mismatch {d1.dim} vs {d2.dim}")
    w = np.linalg.eigvalsh(d1.matrix - d2.matrix)
    return float(min(1.0, 0.5 * np.abs(w).sum()))


def equal_up_to_phase(a: StateVector, b: StateVector, tol: float = PROB_TOL) -> bool:
    return a.labels == b.labels and abs(1.0 - state_fidelity(a, b)) <= tol


def global_phase(reference: StateVector, state: StateVector) -> complex:
    """Unit complex number c with ``state ~= c * reference``."""
    ov = reference.overlap(state)
    if abs(ov) < PROB_TOL:
        raise QuantumStateError("states are orthogonal; no relative phase")
    return ov / abs(ov)
