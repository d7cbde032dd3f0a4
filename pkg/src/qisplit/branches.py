"""Measurement structure of the four splitting schemes, without corrections.

Each scheme is described by who measures what and how many bits each
announcement costs. :func:`enumerate_branches` walks every outcome
exhaustively and hands back the receivers' uncorrected state per branch.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .core import (
    MeasurementBranch,
    OrthonormalBasis,
    StateVector,
    measure_in_basis,
    product_state,
)
from .ensembles import (
    BELL_BASIS,
    X_BASIS,
    ChannelSpec,
    SecretQubit,
    make_channel,
    secret_basis,
)


class ProtocolId(str, enum.Enum):
    ZC1 = "zc1"
    ZC2 = "zc2"
    HBB = "hbb"
    ZHENG = "zheng"


class IncompatibleChannel(ValueError):
    pass


@dataclass(frozen=True)
class MeasurementStep:
    party: str
    targets: tuple[str, ...]
    basis: Callable[[SecretQubit], OrthonormalBasis]
    broadcast: bool  # False: sent point-to-point to Charlie

    @property
    def bits(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class SchemeLayout:
    protocol: ProtocolId
    family: str
    carries_secret_qubit: bool  # sender holds the secret on an extra qubit x
    alice: MeasurementStep
    bob: MeasurementStep | None
    receiver_labels: tuple[str, ...]


_ALICE_XI = MeasurementStep("alice", ("a",), secret_basis, broadcast=True)
_ALICE_BELL = MeasurementStep("alice", ("x", "a"), lambda s: BELL_BASIS, broadcast=True)
_BOB_X = MeasurementStep("bob", ("b",), lambda s: X_BASIS, broadcast=False)

LAYOUTS = {
    ProtocolId.ZC1: SchemeLayout(ProtocolId.ZC1, "ghz", False, _ALICE_XI, _BOB_X, ("c",)),
    ProtocolId.ZC2: SchemeLayout(ProtocolId.ZC2, "w", False, _ALICE_XI, None, ("b", "c")),
    ProtocolId.HBB: SchemeLayout(ProtocolId.HBB, "ghz", True, _ALICE_BELL, _BOB_X, ("c",)),
    ProtocolId.ZHENG: SchemeLayout(ProtocolId.ZHENG, "w", True, _ALICE_BELL, None, ("b", "c")),
}


def layout(protocol: ProtocolId | str) -> SchemeLayout:
    return LAYOUTS[ProtocolId(protocol)]


def default_channel(protocol: ProtocolId | str) -> ChannelSpec:
    return ChannelSpec.ghz() if layout(protocol).family == "ghz" else ChannelSpec.asym_w()


def check_compatible(protocol: ProtocolId | str, channel: ChannelSpec) -> SchemeLayout:
    lay = layout(protocol)
    if channel.kind.family != lay.family:
        raise IncompatibleChannel(
            f"{lay.protocol.value} runs on a {lay.family.upper()}-family channel, "
            f"not {channel.kind.value}"
        )
    return lay


@dataclass(frozen=True, eq=False)
class RawBranch:
    key: tuple[str, ...]
    probability: float
    state: StateVector | None  # receivers' qubits, before any correction


def initial_state(protocol: ProtocolId | str, secret: SecretQubit, channel: ChannelSpec) -> StateVector:
    lay = check_compatible(protocol, channel)
    shared = make_channel(channel)
    if lay.carries_secret_qubit:
        return product_state(secret.state("x"), shared)
    return shared


def alice_branches(
    protocol: ProtocolId | str, secret: SecretQubit, channel: ChannelSpec
) -> list[MeasurementBranch]:
    """Outcomes of the sender's measurement; post-states live on b, c."""
    lay = check_compatible(protocol, channel)
    state = initial_state(protocol, secret, channel)
    return measure_in_basis(state, lay.alice.basis(secret), lay.alice.targets)


def enumerate_branches(
    protocol: ProtocolId | str, secret: SecretQubit, channel: ChannelSpec
) -> list[RawBranch]:
    lay = check_compatible(protocol, channel)
    out = []
    for ab in alice_branches(protocol, secret, channel):
        if lay.bob is None:
            out.append(RawBranch((ab.outcome_label,), ab.probability, ab.post_state))
            continue
        bob_basis = lay.bob.basis(secret)
        if ab.post_state is None:
            out.extend(
                RawBranch((ab.outcome_label, lbl), 0.0, None) for lbl in bob_basis.outcome_labels
            )
            continue
        for bb in measure_in_basis(ab.post_state, bob_basis, lay.bob.targets):
            out.append(
                RawBranch(
                    (ab.outcome_label, bb.outcome_label),
                    ab.probability * bb.probability,
                    bb.post_state,
                )
            )
    return out
