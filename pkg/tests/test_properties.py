import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qisplit.analysis import general_w_feasibility, nonmax_ghz_recovery
from qisplit.branches import alice_branches, initial_state, layout
from qisplit.core import KrausPair, apply_kraus, equal_up_to_phase, make_state
from qisplit.ensembles import (
    OPERATORS,
    ChannelSpec,
    OpName,
    arbitrary,
    arbitrary_grid,
    equatorial,
    make_channel,
    real,
)
from qisplit.protocols import run_protocol, run_zc1

R2 = 1 / math.sqrt(2)
GRID_20 = arbitrary_grid(20, 20)


def _reassemble(protocol, secret):
    """sum_k sqrt(p_k) |basis_k> (x) |branch_k>, in the pre-measurement label order."""
    lay = layout(protocol)
    channel = ChannelSpec.ghz() if lay.family == "ghz" else ChannelSpec.asym_w()
    before = initial_state(protocol, secret, channel)
    basis = lay.alice.basis(secret)
    total = np.zeros(2 ** before.num_qubits, dtype=complex)
    for v, br in zip(basis.vectors, alice_branches(protocol, secret, channel)):
        if br.post_state is not None:
            total += math.sqrt(br.probability) * np.kron(v, br.post_state.amps)
    # measured qubits lead in both orders, so labels line up directly
    assert before.labels[: len(lay.alice.targets)] == lay.alice.targets
    return before, make_state(before.labels, total)


@pytest.mark.parametrize("protocol", ["zc1", "zc2", "hbb", "zheng"])
def test_reconstruction_identity_20x20(protocol):
    for s in GRID_20:
        before, rebuilt = _reassemble(protocol, s)
        # no phase fixup is applied to branches, so agreement is exact, not just up to phase
        assert np.linalg.norm(rebuilt.amps - before.amps) < 1e-10
        assert equal_up_to_phase(before, rebuilt, 1e-10)


def test_sigma_xz_squared_is_identity():
    xz = OPERATORS[OpName.SIGMA_XZ].matrix
    np.testing.assert_allclose(xz @ xz, np.eye(2), atol=1e-12)


def test_operators_and_channels_are_finite():
    for u in OPERATORS.values():
        assert np.all(np.isfinite(u.matrix))
    for spec in (ChannelSpec.ghz(), ChannelSpec.asym_w(), ChannelSpec.nonmax_ghz(0.6, 0.8)):
        assert np.all(np.isfinite(make_channel(spec).amps))


def test_channel_equivalences():
    np.testing.assert_allclose(
        make_channel(ChannelSpec.ghz()).amps, make_channel(ChannelSpec.nonmax_ghz(R2, R2)).amps, atol=1e-12
    )
    np.testing.assert_allclose(
        make_channel(ChannelSpec.asym_w()).amps, make_channel(ChannelSpec.general_w(0.5, 0.5, R2)).amps, atol=1e-12
    )


@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True))
def test_secret_normalized(theta, phi):
    s = arbitrary(theta, phi)
    assert abs(np.vdot(s.ket, s.ket) - 1) < 1e-12
    assert s.alpha >= 0


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(0.05, 1.0), st.floats(-1, 1), st.floats(-1, 1))
def test_apply_kraus_probabilities_sum_to_one(k0, k1, x, y):
    k = KrausPair.from_success(np.diag([k0, k1]))
    vec = np.array([complex(x, y), complex(y, -x)])
    if np.linalg.norm(vec) < 1e-3:
        return
    ok, fail = apply_kraus(make_state("c", vec), k, "c")
    assert abs(ok.probability + fail.probability - 1) < 1e-10


def _admissible_grid(protocol):
    if protocol in ("zc1", "zc2"):
        eq = [equatorial(2 * math.pi * k / 10) for k in range(10)]
        re = [real(t, p) for t in np.linspace(0, math.pi, 10) for p in (0.0, math.pi)]
        return eq + re
    return arbitrary_grid(10, 10)


@pytest.mark.parametrize(
    "protocol, n, p", [("zc1", 4, 0.25), ("zc2", 2, 0.5), ("hbb", 8, 0.125), ("zheng", 4, 0.25)]
)
def test_decomposition_fidelity_and_uniform_probabilities(protocol, n, p):
    for s in _admissible_grid(protocol):
        run = run_protocol(protocol, s)
        assert len(run.branches) == n
        for b in run.branches:
            assert abs(b.probability - p) < 1e-10
            assert abs(b.fidelity - 1) < 1e-10


@pytest.mark.parametrize("secret", [equatorial(0.3), real(2.1), real(0.4, math.pi)])
def test_filter_at_maximal_channel_matches_zc1(secret):
    filt = nonmax_ghz_recovery(secret, R2, R2)
    run = run_zc1(secret)
    assert filt.overall_success_probability == pytest.approx(1.0, abs=1e-10)
    for fb, rb in zip(filt.branches, run.branches):
        assert fb.key == rb.key and fb.ops == rb.ops
        assert fb.success_fidelity == pytest.approx(rb.fidelity, abs=1e-10)


def test_feasibility_iff_structural_condition():
    vals = (0.2, 0.35, 0.5, 0.6, 0.65)
    for a, b in itertools.product(vals, repeat=2):
        c = math.sqrt(1 - a * a - b * b)
        res = general_w_feasibility(a, b, c)
        structural = abs(a - b) < 1e-10 and abs(c - math.sqrt(2) * a) < 1e-10
        assert res.feasible == structural, (a, b, c)
