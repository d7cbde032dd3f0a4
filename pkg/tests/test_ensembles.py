import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qisplit.core import CONSTRUCT_TOL, QuantumStateError
from qisplit.ensembles import (
    BELL_BASIS,
    OPERATORS,
    ChannelKind,
    ChannelSpec,
    Ensemble,
    OpName,
    arbitrary,
    arbitrary_grid,
    equatorial,
    equatorial_grid,
    make_channel,
    make_secret,
    real,
    real_grid,
    secret_basis,
)

R2 = 1 / math.sqrt(2)


def test_equatorial_amplitudes():
    s = equatorial(1.0)
    np.testing.assert_allclose(s.ket, [R2, R2 * np.exp(1j)], atol=1e-15)


def test_real_amplitudes_with_phi_pi():
    s = real(math.pi / 3, math.pi)
    np.testing.assert_allclose(s.ket, [math.cos(math.pi / 6), -0.5], atol=1e-15)


@pytest.mark.parametrize(
    "ens, theta, phi",
    [
        ("equatorial", 1.0, 0.0),
        ("real", 1.0, 0.5),
        ("arbitrary", -0.1, 0.0),
        ("arbitrary", 1.0, 2 * math.pi),
        ("arbitrary", float("nan"), 0.0),
        ("nonsense", 1.0, 0.0),
    ],
)
def test_make_secret_rejects(ens, theta, phi):
    with pytest.raises(ValueError):
        make_secret(ens, theta, phi)


def test_make_secret_accepts_ensemble_edge_cases():
    assert real(0.0).theta == 0.0
    assert real(math.pi, math.pi).phi == math.pi
    assert equatorial(2 * math.pi - 1e-9).ensemble is Ensemble.EQUATORIAL


@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True))
def test_secret_basis_orthonormal_and_contains_secret(theta, phi):
    s = arbitrary(theta, phi)
    basis = secret_basis(s)
    xi, perp = basis.vectors
    assert abs(np.vdot(xi, s.ket) - 1) < 1e-12
    assert abs(np.vdot(xi, perp)) < 1e-12
    assert abs(np.linalg.norm(perp) - 1) < 1e-12


def test_bell_basis_labels_by_parity():
    vecs = dict(zip(BELL_BASIS.outcome_labels, BELL_BASIS.vectors))
    assert vecs["psi+"][0] == vecs["psi+"][3] == pytest.approx(R2)
    assert vecs["phi-"][1] == pytest.approx(R2) and vecs["phi-"][2] == pytest.approx(-R2)


def test_operator_pool_order():
    assert [n.value for n in OpName] == ["Identity", "PaperSigmaX", "SigmaZ", "SigmaXZ", "Omega"]


@pytest.mark.parametrize("name", list(OpName))
def test_operators_unitary(name):
    m = OPERATORS[name].matrix
    np.testing.assert_allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=1e-12)


def test_omega_hermitian_involutory():
    w = OPERATORS[OpName.OMEGA].matrix
    np.testing.assert_allclose(w, w.conj().T, atol=1e-15)
    np.testing.assert_allclose(w @ w, np.eye(4), atol=1e-12)


def test_rotated_sigma_x_squares_to_minus_identity():
    px = OPERATORS[OpName.PAPER_SIGMA_X].matrix
    np.testing.assert_allclose(px @ px, -np.eye(2))


def test_channels():
    ghz = make_channel(ChannelSpec.ghz())
    assert ghz.amps[0] == pytest.approx(R2) and ghz.amps[7] == pytest.approx(R2)
    w = make_channel(ChannelSpec.asym_w())
    np.testing.assert_allclose(w.amps[[1, 2, 4]], [0.5, 0.5, R2])
    assert ChannelSpec.asym_w().is_maximal
    assert not ChannelSpec.nonmax_ghz(0.6, 0.8).is_maximal
    assert ChannelKind.GENERAL_W.family == "w"


@pytest.mark.parametrize(
    "kind, params",
    [
        ("ghz", (0.6, 0.6)),
        ("asym_w", (0.5, 0.5)),
        ("general_w", (0.5, 0.5, 0.5j)),
        ("nonmax_ghz", (float("inf"), 0.0)),
    ],
)
def test_channel_spec_rejects(kind, params):
    with pytest.raises(ValueError):
        ChannelSpec(kind, params)


def test_channel_normalization_tolerance():
    ChannelSpec.nonmax_ghz(0.6, 0.8 + CONSTRUCT_TOL / 10)
    with pytest.raises(ValueError):
        ChannelSpec.nonmax_ghz(0.6, 0.8 + 1e-9)


def test_grids():
    eq = equatorial_grid(4)
    assert [s.phi for s in eq] == pytest.approx([0, math.pi / 2, math.pi, 3 * math.pi / 2])
    rg = real_grid(3)
    assert [s.theta for s in rg] == pytest.approx([0, math.pi / 2, math.pi])
    ag = arbitrary_grid(3, 2)
    assert len(ag) == 6 and all(s.ensemble is Ensemble.ARBITRARY for s in ag)


def test_quantum_state_error_is_value_error():
    assert issubclass(QuantumStateError, ValueError)
