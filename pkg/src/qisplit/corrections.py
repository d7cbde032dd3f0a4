"""Exhaustive search for receiver corrections.

Candidates are ordered sequences of at most two operators from a finite pool.
Single-qubit operators act on Charlie's qubit ``c``; ``Omega`` acts jointly on
``(b, c)`` and is only available while Bob's qubit is still unmeasured.
Ties are broken by enumeration order: shorter first, then pool order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .core import (
    DensityMatrix,
    QuantumStateError,
    StateVector,
    apply_unitary,
    fidelity,
    partial_trace,
)
from .ensembles import OpName, SecretQubit, named_operator

DEFAULT_POOL: tuple[OpName, ...] = tuple(OpName)
TIE_TOL = 1e-12

Op = tuple[OpName, tuple[str, ...]]


@dataclass(frozen=True)
class CorrectionEntry:
    branch_key: tuple[str, ...]
    ops: tuple[Op, ...]
    achieved_fidelity: float

    @property
    def op_names(self) -> tuple[str, ...]:
        return tuple(name.value for name, _ in self.ops)


def op_targets(name: OpName) -> tuple[str, ...]:
    return ("b", "c") if name is OpName.OMEGA else ("c",)


def candidate_sequences(pool: Sequence[OpName], labels: Iterable[str]) -> list[tuple[Op, ...]]:
    pool = [OpName(p) for p in pool]
    if not pool:
        raise ValueError("correction pool is empty")
    labels = set(labels)
    usable = [p for p in pool if set(op_targets(p)) <= labels]
    if not usable:
        raise ValueError(f"no operator in the pool acts on qubits {sorted(labels)}")
    ops = [(p, op_targets(p)) for p in usable]
    seqs: list[tuple[Op, ...]] = [(op,) for op in ops]
    seqs += list(itertools.product(ops, repeat=2))
    return seqs


def apply_ops(state: StateVector, ops: Sequence[Op]) -> StateVector:
    for name, targets in ops:
        state = apply_unitary(state, named_operator(name), targets)
    return state


def charlie_state(state: StateVector) -> DensityMatrix:
    if "c" not in state.labels:
        raise QuantumStateError(f"branch state {state.labels} has no qubit c")
    return partial_trace(state, ["c"])


def corrected_fidelity(state: StateVector, ops: Sequence[Op], secret: SecretQubit) -> float:
    return fidelity(charlie_state(apply_ops(state, ops)), secret.state("c"))


def select_best(
    candidates: Sequence[tuple[Op, ...]], score: Callable[[tuple[Op, ...]], float]
) -> tuple[tuple[Op, ...], float]:
    scores = [score(c) for c in candidates]
    best = max(scores)
    for cand, s in zip(candidates, scores):
        if s >= best - TIE_TOL:
            return cand, s
    raise AssertionError("unreachable")


def derive_correction(
    branch_state: StateVector,
    secret: SecretQubit,
    pool: Sequence[OpName] = DEFAULT_POOL,
    branch_key: tuple[str, ...] = (),
) -> CorrectionEntry:
    """Best correction for one branch of one secret, by brute force."""
    if "c" not in branch_state.labels:
        raise QuantumStateError("branch state must include qubit c")
    cands = candidate_sequences(pool, branch_state.labels)
    ops, f = select_best(cands, lambda seq: corrected_fidelity(branch_state, seq, secret))
    return CorrectionEntry(tuple(branch_key), ops, f)


def derive_common_correction(
    cases: Sequence[tuple[StateVector, SecretQubit]],
    pool: Sequence[OpName] = DEFAULT_POOL,
    branch_key: tuple[str, ...] = (),
) -> CorrectionEntry:
    """One correction for many (state, secret) cases, maximizing the worst fidelity."""
    if not cases:
        raise ValueError("no cases to correct")
    cands = candidate_sequences(pool, cases[0][0].labels)
    ops, f = select_best(
        cands, lambda seq: min(corrected_fidelity(st, seq, s) for st, s in cases)
    )
    return CorrectionEntry(tuple(branch_key), ops, f)
