import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from qisplit.analysis import (
    FEASIBILITY_PROBES,
    general_w_feasibility,
    leakage_report,
    nonmax_ghz_recovery,
    sweep_fidelity,
)
from qisplit.tables import load_tables
from qisplit.ensembles import ChannelSpec, arbitrary, equatorial, equatorial_grid, real, real_grid


# -- filter ---------------------------------------------------------------------

def _oracle_filter_success(a, b, theta, phi, table):
    """Best of the two diagonal filters per branch, computed from raw matrices."""
    channel = oracle.ghz(a, b)
    m = min(a, b)
    total = 0.0
    for key, names in table.items():
        v = oracle.receivers_state("zc1", theta, phi, key, channel)
        p = float(np.vdot(v, v).real)
        v = oracle.apply_named(v / math.sqrt(p), names)
        for wts in ((a, b), (b, a)):
            k = np.diag([m / wts[0], m / wts[1]])
            out = k @ v
            q = float(np.vdot(out, out).real)
            if abs(np.vdot(oracle.ket(theta, phi), out / math.sqrt(q))) ** 2 > 1 - 1e-9:
                total += p * q
                break
        else:
            raise AssertionError(f"no filter recovers {key}")
    return total


@pytest.mark.parametrize("a2", [0.1, 0.2, 0.5, 0.73, 0.9])
@pytest.mark.parametrize("secret", [equatorial(0.0), equatorial(2.3), real(0.7), real(2.5, math.pi)])
def test_filter_success_matches_oracle(a2, secret):
    a, b = math.sqrt(a2), math.sqrt(1 - a2)
    run = nonmax_ghz_recovery(secret, a, b)
    table = {br.key: [n.value for n, _ in br.ops] for br in run.branches}
    expect = _oracle_filter_success(a, b, secret.theta, secret.phi, table)
    assert run.overall_success_probability == pytest.approx(expect, abs=1e-10)
    assert run.overall_success_probability == pytest.approx(2 * min(a2, 1 - a2), abs=1e-10)
    assert run.success_fidelity == pytest.approx(1.0, abs=1e-10)


def test_filter_example_point():
    run = nonmax_ghz_recovery(equatorial(1.0), math.sqrt(0.2), math.sqrt(0.8))
    assert run.overall_success_probability == pytest.approx(0.4, abs=1e-10)
    assert run.reference_success_probability == pytest.approx(0.32, abs=1e-12)
    assert run.predicted_success_probability == pytest.approx(0.4, abs=1e-12)


def test_filter_maximal_channel_always_succeeds():
    run = nonmax_ghz_recovery(real(1.0), 1 / math.sqrt(2), 1 / math.sqrt(2))
    assert run.overall_success_probability == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0, 2 * math.pi, exclude_max=True))
def test_filter_never_below_reference_figure(a2, phi):
    run = nonmax_ghz_recovery(equatorial(phi), math.sqrt(a2), math.sqrt(1 - a2))
    assert run.overall_success_probability >= run.reference_success_probability - 1e-12
    for br in run.branches:
        k = br.kraus
        np.testing.assert_allclose(
            k.success_op.conj().T @ k.success_op + k.fail_op.conj().T @ k.fail_op, np.eye(2), atol=1e-12
        )


def test_filter_rejects_bad_input():
    with pytest.raises(ValueError):
        nonmax_ghz_recovery(arbitrary(1.0, 1.0), 0.6, 0.8)
    with pytest.raises(ValueError):
        nonmax_ghz_recovery(real(1.0), 0.0, 1.0)


# -- feasibility --------------------------------------------------------------

def test_feasibility_at_asymmetric_w():
    res = general_w_feasibility(0.5, 0.5, 1 / math.sqrt(2))
    assert res.feasible and res.min_fidelity == pytest.approx(1.0, abs=1e-10)
    assert res.witness == "a == b and c == sqrt(2)*a"
    assert len(res.probes) == len(FEASIBILITY_PROBES)


@pytest.mark.parametrize(
    "a, b, witness",
    [(0.6, 0.6, "c != sqrt(2)*a"), (0.5, 0.6, "a != b"), (0.3, 0.2, "a != b")],
)
def test_feasibility_fails_off_point(a, b, witness):
    res = general_w_feasibility(a, b, math.sqrt(1 - a * a - b * b))
    assert not res.feasible
    assert res.witness == witness
    assert res.min_fidelity < 1 - 1e-6


def test_feasibility_min_fidelity_matches_oracle():
    a, b = 0.6, 0.6
    c = math.sqrt(1 - 2 * a * a)
    res = general_w_feasibility(a, b, c)
    worst = 1.0
    for s in FEASIBILITY_PROBES:
        for key, entry in load_tables()["zc2"][s.ensemble.value].items():
            _, f = oracle.branch("zc2", s.theta, s.phi, (key,), entry["ops"], oracle.w(a, b, c))
            worst = min(worst, f)
    assert res.min_fidelity == pytest.approx(worst, abs=1e-10)


def test_feasibility_rejects_nonpositive():
    with pytest.raises(ValueError):
        general_w_feasibility(0.0, 0.5, math.sqrt(0.75))


# -- leakage --------------------------------------------------------------------

def test_leakage_equatorial_zc1_nothing_to_see():
    rep = leakage_report("zc1", equatorial_grid(8))
    assert rep.max_distance_from_mixed_b < 1e-10
    assert rep.max_distance_from_mixed_c < 1e-10
    assert rep.witness_b is None and rep.witness_c is None


def test_leakage_real_zc1_witness():
    rep = leakage_report("zc1", [real(math.pi / 3), real(2 * math.pi / 3)])
    assert rep.per_branch_max["0"]["c"] == pytest.approx(0.5, abs=1e-10)
    assert rep.witness_c is not None and rep.witness_c.distance == pytest.approx(0.5, abs=1e-10)


def test_leakage_needs_two_secrets():
    with pytest.raises(ValueError):
        leakage_report("zc1", [equatorial(0.0), equatorial(0.0)])


def test_leakage_marginals_match_oracle():
    s = real(1.0)
    rep = leakage_report("zc2", [s, real(2.0)])
    m = rep.per_branch["0"][0]
    v = oracle.receivers_state("zc2", s.theta, s.phi, ("0",))
    v = v / np.linalg.norm(v)
    mat = v.reshape(2, 2)
    np.testing.assert_allclose(m.rho_b.matrix, mat @ mat.conj().T, atol=1e-12)
    np.testing.assert_allclose(m.rho_c.matrix, mat.T @ mat.conj(), atol=1e-12)


# -- sweeps ---------------------------------------------------------------------

def test_sweep_reports_every_point():
    rep = sweep_fidelity("zc1", real_grid(5))
    assert len(rep.points) == 5
    assert rep.aggregate_min == pytest.approx(1.0, abs=1e-10)


def test_sweep_rejects_empty_and_incompatible():
    with pytest.raises(ValueError):
        sweep_fidelity("zc1", [])
    with pytest.raises(ValueError):
        sweep_fidelity("zc2", [equatorial(0.0)], ChannelSpec.ghz())
