"""Branch-exhaustive runs of the four splitting schemes.

A run walks every measurement outcome, applies the receivers' correction for
that branch (looked up in the generated tables) and scores Charlie's qubit
against the secret. Resource usage is tallied from the same scheme layout
that drives the measurements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .branches import (
    ProtocolId,
    RawBranch,
    alice_branches,
    check_compatible,
    default_channel,
    enumerate_branches,
    layout,
)
from .core import PROB_TOL, DensityMatrix, StateVector, mixture, partial_trace
from .corrections import (
    DEFAULT_POOL,
    Op,
    apply_ops,
    candidate_sequences,
    charlie_state,
    corrected_fidelity,
    derive_correction,
    select_best,
)
from .ensembles import ChannelSpec, Ensemble, OpName, SecretQubit
from .tables import RECOVER_TOL, table_entry, table_ops

PARTIES = ("alice", "bob", "charlie")


@dataclass(frozen=True)
class ClassicalMessage:
    sender: str
    audience: str  # "broadcast" or the receiving party
    bits: str
    delivered: bool = True


@dataclass(frozen=True)
class PartyCost:
    measurement_count: int = 0
    max_measurement_arity: int = 0
    cbits_broadcast: int = 0
    cbits_point_to_point: int = 0
    cbits_withheld: int = 0
    joint_unitaries: int = 0

    def __post_init__(self):
        for name, value in vars(self).items():
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")


@dataclass(frozen=True)
class ResourceLedger:
    alice: PartyCost
    bob: PartyCost
    charlie: PartyCost

    def party(self, name: str) -> PartyCost:
        return getattr(self, name)

    @property
    def receiver_joint_unitaries(self) -> int:
        # Bob and Charlie both take part in each joint operation; count it once.
        return max(self.bob.joint_unitaries, self.charlie.joint_unitaries)

    def as_dict(self) -> dict:
        return {p: vars(self.party(p)).copy() for p in PARTIES}


@dataclass(frozen=True, eq=False)
class BranchRecord:
    key: tuple[str, ...]
    probability: float
    ops: tuple[Op, ...]
    final_state: StateVector | None
    charlie: DensityMatrix | None
    fidelity: float | None
    messages: tuple[ClassicalMessage, ...]
    note: str = ""

    @property
    def op_names(self) -> tuple[str, ...]:
        return tuple(n.value for n, _ in self.ops)


@dataclass(frozen=True, eq=False)
class ProtocolRun:
    protocol: ProtocolId
    secret: SecretQubit
    channel: ChannelSpec
    branches: tuple[BranchRecord, ...]
    ledger: ResourceLedger
    controlled: bool = False
    receiver_marginals: dict[str, DensityMatrix] | None = field(default=None)

    def __post_init__(self):
        total = sum(b.probability for b in self.branches)
        if abs(total - 1.0) > PROB_TOL:
            raise AssertionError(f"branch probabilities sum to {total}, not 1")

    @property
    def min_fidelity(self) -> float:
        return min(b.fidelity for b in self.branches if b.fidelity is not None)

    @property
    def average_fidelity(self) -> float:
        return sum(b.probability * b.fidelity for b in self.branches if b.fidelity is not None)

    def branch(self, *key: str) -> BranchRecord:
        for b in self.branches:
            if b.key == tuple(key):
                return b
        raise KeyError(key)


def _messages(protocol: ProtocolId, key: tuple[str, ...], withheld: bool) -> tuple[ClassicalMessage, ...]:
    lay = layout(protocol)
    alice_bits = _alice_bits(protocol, key[0])
    msgs = [ClassicalMessage("alice", "broadcast", alice_bits, delivered=not withheld)]
    if lay.bob is not None:
        msgs.append(ClassicalMessage("bob", "charlie", "0" if key[1] == "+x" else "1"))
    return tuple(msgs)


_BELL_BITS = {"psi+": "00", "psi-": "01", "phi+": "10", "phi-": "11"}


def _alice_bits(protocol: ProtocolId, outcome: str) -> str:
    if layout(protocol).alice.bits == 2:
        return _BELL_BITS[outcome]
    return outcome


def build_ledger(protocol: ProtocolId, branches: Sequence[BranchRecord], withheld: bool = False) -> ResourceLedger:
    lay = layout(protocol)
    a = lay.alice
    alice = PartyCost(
        measurement_count=1,
        max_measurement_arity=len(a.targets),
        cbits_broadcast=0 if withheld else a.bits,
        cbits_withheld=a.bits if withheld else 0,
    )
    bob_kw: dict = {}
    if lay.bob is not None:
        bob_kw = dict(
            measurement_count=1,
            max_measurement_arity=len(lay.bob.targets),
            cbits_point_to_point=lay.bob.bits,
        )
    joint = max(
        (sum(1 for name, _ in b.ops if name is OpName.OMEGA) for b in branches), default=0
    )
    return ResourceLedger(alice, PartyCost(joint_unitaries=joint, **bob_kw), PartyCost(joint_unitaries=joint))


def _record(raw: RawBranch, ops, secret, messages, note="") -> BranchRecord:
    if raw.state is None:
        return BranchRecord(raw.key, 0.0, tuple(ops), None, None, None, messages, "null branch")
    final = apply_ops(raw.state, ops)
    rho = charlie_state(final)
    return BranchRecord(
        raw.key,
        raw.probability,
        tuple(ops),
        final,
        rho,
        corrected_fidelity(raw.state, ops, secret),
        messages,
        note,
    )


def _table_correction(protocol: ProtocolId, secret: SecretQubit, raw: RawBranch):
    entry = table_entry(protocol, secret.ensemble, raw.key)
    if entry["recoverable"] or raw.state is None:
        return table_ops(entry), ""
    # No fixed correction exists; report the best any single choice could do.
    best = derive_correction(raw.state, secret, DEFAULT_POOL, raw.key)
    return best.ops, "no fixed correction for this ensemble; per-secret best correction applied"


def run_protocol(
    protocol: ProtocolId | str, secret: SecretQubit, channel: ChannelSpec | None = None
) -> ProtocolRun:
    protocol = ProtocolId(protocol)
    channel = channel or default_channel(protocol)
    check_compatible(protocol, channel)
    records = []
    for raw in enumerate_branches(protocol, secret, channel):
        ops, note = _table_correction(protocol, secret, raw)
        records.append(_record(raw, ops, secret, _messages(protocol, raw.key, False), note))
    return ProtocolRun(protocol, secret, channel, tuple(records), build_ledger(protocol, records))


def run_zc1(secret: SecretQubit, channel: ChannelSpec | None = None) -> ProtocolRun:
    """Sender measures in the secret's own basis; Bob measures X; Charlie corrects."""
    return run_protocol(ProtocolId.ZC1, secret, channel)


def run_zc2(secret: SecretQubit, channel: ChannelSpec | None = None) -> ProtocolRun:
    """Sender measures in the secret's own basis; receivers apply a joint unitary."""
    return run_protocol(ProtocolId.ZC2, secret, channel)


def run_hbb(secret: SecretQubit, channel: ChannelSpec | None = None) -> ProtocolRun:
    """Bell measurement on (x, a) over a GHZ channel, then Bob's X measurement."""
    return run_protocol(ProtocolId.HBB, secret, channel)


def run_zheng(secret: SecretQubit, channel: ChannelSpec | None = None) -> ProtocolRun:
    """Bell measurement on (x, a) over the asymmetric W channel."""
    return run_protocol(ProtocolId.ZHENG, secret, channel)


def receiver_view(key: tuple[str, ...]) -> tuple[str, ...]:
    """What the receivers know about a branch when the sender stays silent."""
    return key[1:]


def best_fixed_strategy(
    protocol: ProtocolId | str, secret: SecretQubit, channel: ChannelSpec | None = None
) -> dict[tuple[str, ...], tuple[Op, ...]]:
    """Corrections that ignore the sender's outcome, maximizing average fidelity.

    Maps each receiver-visible outcome (Bob's result, or nothing) to the
    operator sequence that is best on average over the sender's outcomes.
    """
    protocol = ProtocolId(protocol)
    channel = channel or default_channel(protocol)
    groups: dict[tuple[str, ...], list[RawBranch]] = {}
    for raw in enumerate_branches(protocol, secret, channel):
        groups.setdefault(receiver_view(raw.key), []).append(raw)
    strategy = {}
    for view, raws in groups.items():
        live = [r for r in raws if r.state is not None]
        cands = candidate_sequences(DEFAULT_POOL, live[0].state.labels)

        def score(seq, live=live):
            return sum(r.probability * corrected_fidelity(r.state, seq, secret) for r in live)

        strategy[view], _ = select_best(cands, score)
    return strategy


def receiver_marginals(
    protocol: ProtocolId | str, secret: SecretQubit, channel: ChannelSpec | None = None
) -> dict[str, DensityMatrix]:
    """States of b and c after the sender measures, averaged over her outcome."""
    protocol = ProtocolId(protocol)
    channel = channel or default_channel(protocol)
    live = [br for br in alice_branches(protocol, secret, channel) if br.post_state is not None]
    return {
        q: mixture([(br.probability, partial_trace(br.post_state, [q])) for br in live])
        for q in ("b", "c")
    }


def run_controlled(
    protocol: ProtocolId | str,
    secret: SecretQubit,
    channel: ChannelSpec | None = None,
    withhold_alice_message: bool = True,
) -> ProtocolRun:
    """Run with the sender's announcement optionally withheld.

    When withheld, the receivers' corrections are fixed before any branch is
    enumerated and are indexed only by what they can see.
    """
    protocol = ProtocolId(protocol)
    channel = channel or default_channel(protocol)
    check_compatible(protocol, channel)
    if not withhold_alice_message:
        return run_protocol(protocol, secret, channel)
    strategy = best_fixed_strategy(protocol, secret, channel)
    records = []
    for raw in enumerate_branches(protocol, secret, channel):
        ops = strategy[receiver_view(raw.key)]
        records.append(
            _record(raw, ops, secret, _messages(protocol, raw.key, True), "sender message withheld")
        )
    return ProtocolRun(
        protocol,
        secret,
        channel,
        tuple(records),
        build_ledger(protocol, records, withheld=True),
        controlled=True,
        receiver_marginals=receiver_marginals(protocol, secret, channel),
    )


def admissible(protocol: ProtocolId | str, secret: SecretQubit, channel: ChannelSpec) -> bool:
    """Whether full recovery is expected for this combination."""
    protocol = ProtocolId(protocol)
    if not channel.is_maximal:
        return False
    if protocol in (ProtocolId.ZC1, ProtocolId.ZC2):
        return secret.ensemble is not Ensemble.ARBITRARY
    return True


def recovered(run: ProtocolRun, tol: float = RECOVER_TOL) -> bool:
    return run.min_fidelity >= 1 - tol
