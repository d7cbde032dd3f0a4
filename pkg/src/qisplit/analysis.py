"""Sweeps, leakage, probabilistic recovery and channel feasibility."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .branches import ProtocolId, alice_branches, check_compatible, default_channel, enumerate_branches
from .core import (
    PROB_TOL,
    DensityMatrix,
    KrausPair,
    apply_kraus,
    partial_trace,
    state_fidelity,
    trace_distance,
)
from .corrections import Op, apply_ops
from .ensembles import ChannelSpec, Ensemble, SecretQubit, equatorial, real
from .protocols import ProtocolRun, ResourceLedger, run_protocol
from .tables import table_entry, table_ops

# Sweeps


@dataclass(frozen=True, eq=False)
class SweepPoint:
    secret: SecretQubit
    min_fidelity: float
    average_fidelity: float
    ledger: ResourceLedger
    run: ProtocolRun


@dataclass(frozen=True, eq=False)
class SweepReport:
    protocol: ProtocolId
    channel: ChannelSpec
    points: tuple[SweepPoint, ...]

    @property
    def aggregate_min(self) -> float:
        return min(p.min_fidelity for p in self.points)


def sweep_fidelity(
    protocol: ProtocolId | str,
    grid: Sequence[SecretQubit],
    channel: ChannelSpec | None = None,
) -> SweepReport:
    protocol = ProtocolId(protocol)
    channel = channel or default_channel(protocol)
    check_compatible(protocol, channel)
    if not grid:
        raise ValueError("sweep grid is empty")
    points = []
    for s in grid:
        run = run_protocol(protocol, s, channel)
        points.append(SweepPoint(s, run.min_fidelity, run.average_fidelity, run.ledger, run))
    return SweepReport(protocol, channel, tuple(points))


# Leakage


@dataclass(frozen=True, eq=False)
class BranchMarginals:
    secret: SecretQubit
    probability: float
    rho_b: DensityMatrix
    rho_c: DensityMatrix


@dataclass(frozen=True)
class LeakageWitness:
    branch: str
    qubit: str
    first: SecretQubit
    second: SecretQubit
    distance: float


@dataclass(frozen=True, eq=False)
class LeakageReport:
    """Receivers' single-qubit states after the sender's announcement.

    Distances are maximized over every pair of grid secrets within each
    announced branch; a positive distance means a lone receiver can tell
    those secrets apart.
    """

    protocol: ProtocolId
    channel: ChannelSpec
    grid: tuple[SecretQubit, ...]
    per_branch: dict[str, tuple[BranchMarginals, ...]]
    max_pairwise_trace_distance_b: float
    max_pairwise_trace_distance_c: float
    max_distance_from_mixed_b: float
    max_distance_from_mixed_c: float
    witness_b: LeakageWitness | None = None
    witness_c: LeakageWitness | None = None
    per_branch_max: dict[str, dict[str, float]] = field(default_factory=dict)


def _pairwise_max(branch: str, qubit: str, items: Sequence[BranchMarginals]):
    best, witness = 0.0, None
    for m1, m2 in itertools.combinations(items, 2):
        d = trace_distance(getattr(m1, f"rho_{qubit}"), getattr(m2, f"rho_{qubit}"))
        if d > best:
            best = d
            if d > PROB_TOL:
                witness = LeakageWitness(branch, qubit, m1.secret, m2.secret, d)
    return best, witness


def leakage_report(
    protocol: ProtocolId | str,
    grid: Sequence[SecretQubit],
    channel: ChannelSpec | None = None,
) -> LeakageReport:
    protocol = ProtocolId(protocol)
    channel = channel or default_channel(protocol)
    check_compatible(protocol, channel)
    distinct = {(s.theta, s.phi) for s in grid}
    if len(distinct) < 2:
        raise ValueError("leakage needs at least two distinct secrets in the grid")

    per_branch: dict[str, list[BranchMarginals]] = {}
    for s in grid:
        for br in alice_branches(protocol, s, channel):
            if br.post_state is None:
                continue
            per_branch.setdefault(br.outcome_label, []).append(
                BranchMarginals(
                    s,
                    br.probability,
                    partial_trace(br.post_state, ["b"]),
                    partial_trace(br.post_state, ["c"]),
                )
            )

    mixed = DensityMatrix.maximally_mixed(1)
    stats = {"b": (0.0, None), "c": (0.0, None)}
    from_mixed = {"b": 0.0, "c": 0.0}
    per_branch_max = {}
    for key, items in per_branch.items():
        per_branch_max[key] = {}
        for q in ("b", "c"):
            d, w = _pairwise_max(key, q, items)
            per_branch_max[key][q] = d
            if d > stats[q][0]:
                stats[q] = (d, w)
            from_mixed[q] = max(
                from_mixed[q], *(trace_distance(getattr(m, f"rho_{q}"), mixed) for m in items)
            )

    return LeakageReport(
        protocol,
        channel,
        tuple(grid),
        {k: tuple(v) for k, v in per_branch.items()},
        stats["b"][0],
        stats["c"][0],
        from_mixed["b"],
        from_mixed["c"],
        stats["b"][1],
        stats["c"][1],
        per_branch_max,
    )


# Non-maximal GHZ channel with amplitude-equalizing filter


@dataclass(frozen=True, eq=False)
class FilterBranch:
    key: tuple[str, ...]
    probability: float
    ops: tuple[Op, ...]
    kraus: KrausPair
    success_probability: float  # conditional on this branch
    success_fidelity: float | None


@dataclass(frozen=True, eq=False)
class FilterRun:
    a: float
    b: float
    secret: SecretQubit
    branches: tuple[FilterBranch, ...]
    overall_success_probability: float
    success_fidelity: float
    reference_success_probability: float  # 2 a^2 b^2

    @property
    def predicted_success_probability(self) -> float:
        return 2 * min(self.a, self.b) ** 2


def equalizing_filter(a: float, b: float, weights: tuple[float, float]) -> KrausPair:
    """Filter that rescales amplitude k by min(a, b) / weights[k]."""
    m = min(a, b)
    return KrausPair.from_success(np.diag([m / weights[0], m / weights[1]]))


_ORIENTATION_PROBES = {Ensemble.EQUATORIAL: equatorial(0.7), Ensemble.REAL: real(1.1)}


def _corrected(secret: SecretQubit, channel: ChannelSpec) -> list[tuple]:
    out = []
    for raw in enumerate_branches(ProtocolId.ZC1, secret, channel):
        ops = table_ops(table_entry(ProtocolId.ZC1, secret.ensemble, raw.key))
        state = None if raw.state is None else apply_ops(raw.state, ops)
        out.append((raw, ops, state))
    return out


def _filter_orientations(ensemble: Ensemble, a: float, b: float) -> dict[tuple[str, ...], tuple[float, float]]:
    """Which channel weight multiplies each amplitude, per branch.

    Fixed by the branch and ensemble alone, so it is read off a probe secret
    and then reused for any secret of the same ensemble.
    """
    probe = _ORIENTATION_PROBES[ensemble]
    channel = ChannelSpec.nonmax_ghz(a, b)
    out = {}
    for raw, _, state in _corrected(probe, channel):
        for weights in ((a, b), (b, a)):
            ok, _ = apply_kraus(state, equalizing_filter(a, b, weights), "c")
            if ok.post_state is not None and state_fidelity(ok.post_state, probe.state("c")) > 1 - 1e-9:
                out[raw.key] = weights
                break
        else:
            raise AssertionError(f"no filter orientation recovers branch {raw.key}")
    return out


def nonmax_ghz_recovery(secret: SecretQubit, a: float, b: float) -> FilterRun:
    """ZC1 over ``a|000> + b|111>`` followed by a local equalizing filter.

    Succeeds with probability ``2 min(a, b)^2`` for every equatorial or real
    secret; on success Charlie holds the secret exactly.
    """
    if secret.ensemble is Ensemble.ARBITRARY:
        raise ValueError("filtered recovery needs an equatorial or real secret")
    if a <= 0 or b <= 0:
        raise ValueError("channel coefficients must be positive")
    channel = ChannelSpec.nonmax_ghz(a, b)
    orient = _filter_orientations(secret.ensemble, a, b)
    branches = []
    for raw, ops, state in _corrected(secret, channel):
        k = equalizing_filter(a, b, orient[raw.key])
        if state is None:
            branches.append(FilterBranch(raw.key, 0.0, ops, k, 0.0, None))
            continue
        ok, _ = apply_kraus(state, k, "c")
        fid = None if ok.post_state is None else state_fidelity(ok.post_state, secret.state("c"))
        branches.append(FilterBranch(raw.key, raw.probability, ops, k, ok.probability, fid))

    overall = sum(br.probability * br.success_probability for br in branches)
    fids = [br.success_fidelity for br in branches if br.success_fidelity is not None]
    run = FilterRun(a, b, secret, tuple(branches), overall, min(fids), 2 * a * a * b * b)
    if overall < run.reference_success_probability - PROB_TOL:
        raise AssertionError(
            f"filter success {overall} below the reference figure {run.reference_success_probability}"
        )
    return run


# General W feasibility

FEASIBILITY_PROBES: tuple[SecretQubit, ...] = (
    equatorial(0.3),
    equatorial(1.4),
    equatorial(2.9),
    equatorial(4.6),
    real(0.5),
    real(1.2),
    real(2.2),
    real(2.7, math.pi),
)


@dataclass(frozen=True)
class FeasibilityResult:
    params: tuple[float, float, float]
    feasible: bool
    witness: str
    min_fidelity: float
    probes: tuple[str, ...]


def general_w_feasibility(a: float, b: float, c: float, tol: float = PROB_TOL) -> FeasibilityResult:
    """Does the fixed ZC2 procedure still recover secrets over ``a|001>+b|010>+c|100>``?"""
    if min(a, b, c) <= 0:
        raise ValueError("W coefficients must be positive")
    channel = ChannelSpec.general_w(a, b, c)
    worst = min(run_protocol(ProtocolId.ZC2, s, channel).min_fidelity for s in FEASIBILITY_PROBES)
    if abs(a - b) >= tol:
        witness = "a != b"
    elif abs(c - math.sqrt(2) * a) >= tol:
        witness = "c != sqrt(2)*a"
    else:
        witness = "a == b and c == sqrt(2)*a"
    return FeasibilityResult(
        (a, b, c), worst >= 1 - tol, witness, worst, tuple(str(s) for s in FEASIBILITY_PROBES)
    )
