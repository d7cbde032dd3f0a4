"""Secret qubits, the sender's measurement basis, named gates and channels."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CONSTRUCT_TOL,
    OrthonormalBasis,
    QuantumStateError,
    StateVector,
    Unitary,
    make_state,
)

SQRT1_2 = 1 / math.sqrt(2)


class Ensemble(str, enum.Enum):
    EQUATORIAL = "equatorial"
    REAL = "real"
    ARBITRARY = "arbitrary"


@dataclass(frozen=True)
class SecretQubit:
    """A secret ``cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>``.

    Use :func:`make_secret` to construct; it validates ensemble membership.
    """

    ensemble: Ensemble
    theta: float
    phi: float

    @property
    def alpha(self) -> float:
        return math.cos(self.theta / 2)

    @property
    def beta(self) -> complex:
        return math.sin(self.theta / 2) * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def ket(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def state(self, label: str = "c") -> StateVector:
        return StateVector((label,), self.ket)

    def __str__(self):
        return f"{self.ensemble.value}(theta={self.theta:.6g}, phi={self.phi:.6g})"


def make_secret(ensemble: Ensemble | str, theta: float, phi: float = 0.0) -> SecretQubit:
    """Validated secret; ensemble constraints are checked, never coerced."""
    ensemble = Ensemble(ensemble)
    theta, phi = float(theta), float(phi)
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise ValueError("angles must be finite")
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta={theta} outside [0, pi]")
    if not 0.0 <= phi < 2 * math.pi:
        raise ValueError(f"phi={phi} outside [0, 2pi)")
    if ensemble is Ensemble.EQUATORIAL and abs(theta - math.pi / 2) > CONSTRUCT_TOL:
        raise ValueError(f"equatorial secret needs theta = pi/2, got {theta}")
    if ensemble is Ensemble.REAL and min(abs(phi), abs(phi - math.pi)) > CONSTRUCT_TOL:
        raise ValueError(f"real secret needs phi in {{0, pi}}, got {phi}")
    return SecretQubit(ensemble, theta, phi)


def equatorial(phi: float) -> SecretQubit:
    return make_secret(Ensemble.EQUATORIAL, math.pi / 2, phi)


def real(theta: float, phi: float = 0.0) -> SecretQubit:
    return make_secret(Ensemble.REAL, theta, phi)


def arbitrary(theta: float, phi: float) -> SecretQubit:
    return make_secret(Ensemble.ARBITRARY, theta, phi)


def secret_basis(s: SecretQubit) -> OrthonormalBasis:
    """The basis {xi, xi_perp} with xi_perp = conj(beta)|0> - alpha|1>.

    Outcome "0" is the secret itself, "1" its orthogonal complement; these
    labels double as the sender's one-bit announcement.
    """
    xi = np.array([s.alpha, s.beta], dtype=complex)
    xi_perp = np.array([np.conj(s.beta), -s.alpha], dtype=complex)
    return OrthonormalBasis((xi, xi_perp), ("0", "1"))


X_BASIS = OrthonormalBasis(
    (np.array([SQRT1_2, SQRT1_2]), np.array([SQRT1_2, -SQRT1_2])), ("+x", "-x")
)
Z_BASIS = OrthonormalBasis((np.array([1.0, 0.0]), np.array([0.0, 1.0])), ("0", "1"))

# psi-states are the even-parity pair and phi-states the odd-parity pair.
BELL_BASIS = OrthonormalBasis(
    (
        np.array([SQRT1_2, 0, 0, SQRT1_2]),
        np.array([SQRT1_2, 0, 0, -SQRT1_2]),
        np.array([0, SQRT1_2, SQRT1_2, 0]),
        np.array([0, SQRT1_2, -SQRT1_2, 0]),
    ),
    ("psi+", "psi-", "phi+", "phi-"),
)


class OpName(str, enum.Enum):
    """Correction operators, in the fixed order used for tie-breaking."""

    IDENTITY = "Identity"
    PAPER_SIGMA_X = "PaperSigmaX"
    SIGMA_Z = "SigmaZ"
    SIGMA_XZ = "SigmaXZ"
    OMEGA = "Omega"

    @property
    def arity(self) -> int:
        return 2 if self is OpName.OMEGA else 1


_MATRICES = {
    OpName.IDENTITY: np.eye(2),
    # |1><0| - |0><1|; squares to -I, unlike the usual Pauli X.
    OpName.PAPER_SIGMA_X: np.array([[0, -1], [1, 0]]),
    OpName.SIGMA_Z: np.array([[1, 0], [0, -1]]),
    OpName.SIGMA_XZ: np.array([[0, 1], [1, 0]]),
    # Hadamard on span{|01>, |10>}, identity on |00>, |11>.
    OpName.OMEGA: np.array(
        [
            [1, 0, 0, 0],
            [0, SQRT1_2, SQRT1_2, 0],
            [0, SQRT1_2, -SQRT1_2, 0],
            [0, 0, 0, 1],
        ]
    ),
}

OPERATORS: dict[OpName, Unitary] = {
    name: Unitary(m, name.value) for name, m in _MATRICES.items()
}


def named_operator(name: OpName | str) -> Unitary:
    return OPERATORS[OpName(name)]


class ChannelKind(str, enum.Enum):
    GHZ = "ghz"
    NONMAX_GHZ = "nonmax_ghz"
    ASYM_W = "asym_w"
    GENERAL_W = "general_w"

    @property
    def family(self) -> str:
        return "ghz" if self in (ChannelKind.GHZ, ChannelKind.NONMAX_GHZ) else "w"


@dataclass(frozen=True)
class ChannelSpec:
    """Three-qubit resource state shared by sender (a) and receivers (b, c).

    GHZ-family params are ``(a, b)`` for ``a|000> + b|111>``; W-family params
    are ``(a, b, c)`` for ``a|001> + b|010> + c|100>``.
    """

    kind: ChannelKind
    params: tuple[float, ...]

    def __post_init__(self):
        kind = ChannelKind(self.kind)
        params = tuple(self.params)
        if any(isinstance(p, complex) or np.iscomplexobj(p) for p in params):
            raise ValueError("channel coefficients must be real")
        params = tuple(float(p) for p in params)
        want = 2 if kind.family == "ghz" else 3
        if len(params) != want:
            raise ValueError(f"{kind.value} channel takes {want} coefficients, got {len(params)}")
        if not all(math.isfinite(p) for p in params):
            raise ValueError("channel coefficients must be finite")
        if abs(sum(p * p for p in params) - 1.0) > CONSTRUCT_TOL:
            raise ValueError(f"channel coefficients {params} are not normalized")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", params)

    @classmethod
    def ghz(cls) -> "ChannelSpec":
        return cls(ChannelKind.GHZ, (SQRT1_2, SQRT1_2))

    @classmethod
    def nonmax_ghz(cls, a: float, b: float) -> "ChannelSpec":
        return cls(ChannelKind.NONMAX_GHZ, (a, b))

    @classmethod
    def asym_w(cls) -> "ChannelSpec":
        return cls(ChannelKind.ASYM_W, (0.5, 0.5, SQRT1_2))

    @classmethod
    def general_w(cls, a: float, b: float, c: float) -> "ChannelSpec":
        return cls(ChannelKind.GENERAL_W, (a, b, c))

    @property
    def is_maximal(self) -> bool:
        return self.kind in (ChannelKind.GHZ, ChannelKind.ASYM_W)

    def __str__(self):
        if self.is_maximal:
            return self.kind.value
        return f"{self.kind.value}({', '.join(f'{p:.6g}' for p in self.params)})"


def make_channel(spec: ChannelSpec) -> StateVector:
    """The shared three-qubit state on labels a, b, c."""
    amps = np.zeros(8)
    if spec.kind.family == "ghz":
        amps[0b000], amps[0b111] = spec.params
    else:
        amps[0b001], amps[0b010], amps[0b100] = spec.params
    state = make_state("abc", amps)
    if not np.allclose(state.amps, amps, rtol=0, atol=CONSTRUCT_TOL):
        raise QuantumStateError("channel coefficients are not normalized")
    return state


def equatorial_grid(n: int) -> list[SecretQubit]:
    """``n`` equally spaced phases on the equator, starting at 0."""
    return [equatorial(2 * math.pi * k / n) for k in range(n)]


def real_grid(n: int, phi: float = 0.0) -> list[SecretQubit]:
    """``n`` polar angles spanning [0, pi] inclusive at fixed phi (0 or pi)."""
    return [real(t, phi) for t in np.linspace(0.0, math.pi, n)]


def arbitrary_grid(n_theta: int, n_phi: int) -> list[SecretQubit]:
    """Product grid: theta over [0, pi] inclusive, phi over [0, 2pi) uniform."""
    return [
        arbitrary(t, 2 * math.pi * k / n_phi)
        for t in np.linspace(0.0, math.pi, n_theta)
        for k in range(n_phi)
    ]
