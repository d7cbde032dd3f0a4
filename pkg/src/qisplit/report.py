"""Flat, deterministic report records and their JSON-lines / CSV encodings.

Floats are rounded to 12 significant digits before encoding so that output
is byte-identical across runs and platforms.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

import numpy as np

from .analysis import FeasibilityResult, FilterRun, LeakageReport
from .core import DensityMatrix, trace_distance
from .protocols import ProtocolRun

SIG_DIGITS = 12


def fmt_float(x: float) -> float:
    if x is None or not math.isfinite(x):
        return x
    y = float(f"{x:.{SIG_DIGITS}g}")
    # 1e-17 numerical dust and -0.0 both print as 0.
    return 0.0 if abs(y) < 1e-14 else y


def _ops(ops) -> str:
    return "+".join(name.value for name, _ in ops) or "-"


def _matrix(dm: DensityMatrix) -> str:
    parts = []
    for z in dm.matrix.reshape(-1):
        re, im = fmt_float(z.real), fmt_float(z.imag)
        parts.append(f"{re:.{SIG_DIGITS}g}" if im == 0 else f"{re:.{SIG_DIGITS}g}{im:+.{SIG_DIGITS}g}j")
    return ";".join(parts)


def run_record(run: ProtocolRun) -> dict:
    """One record per protocol run (one grid point)."""
    led = run.ledger
    notes = sorted({b.note for b in run.branches if b.note})
    return {
        "protocol": run.protocol.value,
        "ensemble": run.secret.ensemble.value,
        "theta": fmt_float(run.secret.theta),
        "phi": fmt_float(run.secret.phi),
        "channel": str(run.channel),
        "controlled": run.controlled,
        "branch_key": " ".join("|".join(b.key) for b in run.branches),
        "probability": " ".join(f"{fmt_float(b.probability):.12g}" for b in run.branches),
        "corrections": " ".join(_ops(b.ops) for b in run.branches),
        "fidelity": " ".join(
            "-" if b.fidelity is None else f"{fmt_float(b.fidelity):.12g}" for b in run.branches
        ),
        "min_fidelity": fmt_float(run.min_fidelity),
        "average_fidelity": fmt_float(run.average_fidelity),
        "cbits_broadcast": led.alice.cbits_broadcast,
        "cbits_withheld": led.alice.cbits_withheld,
        "cbits_point_to_point": led.bob.cbits_point_to_point,
        "measurement_arity": led.alice.max_measurement_arity,
        "receiver_joint_unitaries": led.receiver_joint_unitaries,
        "notes": "; ".join(notes),
    }


def branch_records(run: ProtocolRun) -> list[dict]:
    """One record per enumerated branch."""
    led = run.ledger
    return [
        {
            "protocol": run.protocol.value,
            "ensemble": run.secret.ensemble.value,
            "theta": fmt_float(run.secret.theta),
            "phi": fmt_float(run.secret.phi),
            "branch_key": "|".join(b.key),
            "probability": fmt_float(b.probability),
            "corrections": _ops(b.ops),
            "fidelity": None if b.fidelity is None else fmt_float(b.fidelity),
            "cbits_broadcast": led.alice.cbits_broadcast,
            "measurement_arity": led.alice.max_measurement_arity,
            "notes": b.note,
        }
        for b in run.branches
    ]


def leakage_records(report: LeakageReport) -> list[dict]:
    mixed = DensityMatrix.maximally_mixed(1)

    def row(kind, **kw):
        base = {
            "record": kind,
            "protocol": report.protocol.value,
            "channel": str(report.channel),
            "ensemble": "",
            "theta": None,
            "phi": None,
            "branch_key": "",
            "probability": None,
            "rho_b": "",
            "rho_c": "",
            "distance_b_from_mixed": None,
            "distance_c_from_mixed": None,
            "max_pairwise_b": None,
            "max_pairwise_c": None,
            "witness": "",
        }
        base.update(kw)
        return base

    rows = []
    for key in sorted(report.per_branch):
        for m in report.per_branch[key]:
            rows.append(
                row(
                    "marginal",
                    ensemble=m.secret.ensemble.value,
                    theta=fmt_float(m.secret.theta),
                    phi=fmt_float(m.secret.phi),
                    branch_key=key,
                    probability=fmt_float(m.probability),
                    rho_b=_matrix(m.rho_b),
                    rho_c=_matrix(m.rho_c),
                    distance_b_from_mixed=fmt_float(trace_distance(m.rho_b, mixed)),
                    distance_c_from_mixed=fmt_float(trace_distance(m.rho_c, mixed)),
                )
            )
    witness = report.witness_c or report.witness_b
    rows.append(
        row(
            "summary",
            distance_b_from_mixed=fmt_float(report.max_distance_from_mixed_b),
            distance_c_from_mixed=fmt_float(report.max_distance_from_mixed_c),
            max_pairwise_b=fmt_float(report.max_pairwise_trace_distance_b),
            max_pairwise_c=fmt_float(report.max_pairwise_trace_distance_c),
            witness=""
            if witness is None
            else f"branch {witness.branch} qubit {witness.qubit}: {witness.first} vs {witness.second}",
        )
    )
    return rows


def filter_record(run: FilterRun) -> dict:
    return {
        "a2": fmt_float(run.a**2),
        "b2": fmt_float(run.b**2),
        "ensemble": run.secret.ensemble.value,
        "theta": fmt_float(run.secret.theta),
        "phi": fmt_float(run.secret.phi),
        "success_probability": fmt_float(run.overall_success_probability),
        "predicted_probability": fmt_float(run.predicted_success_probability),
        "reference_figure": fmt_float(run.reference_success_probability),
        "success_fidelity": fmt_float(run.success_fidelity),
        "branch_success": " ".join(
            f"{'|'.join(b.key)}:{fmt_float(b.success_probability):.12g}" for b in run.branches
        ),
    }


def feasibility_record(res: FeasibilityResult) -> dict:
    a, b, c = res.params
    return {
        "a": fmt_float(a),
        "b": fmt_float(b),
        "c": fmt_float(c),
        "feasible": res.feasible,
        "witness": res.witness,
        "min_fidelity": fmt_float(res.min_fidelity),
        "probes": len(res.probes),
    }


def _plain(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return fmt_float(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def to_jsonl(records: Iterable[dict]) -> str:
    return "".join(
        json.dumps({k: _plain(v) for k, v in r.items()}, ensure_ascii=True) + "\n" for r in records
    )


def _csv_cell(value) -> str:
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{SIG_DIGITS}g}"
    return str(value)


def to_csv(records: Sequence[dict]) -> str:
    records = list(records)
    if not records:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(records[0]))
    for r in records:
        writer.writerow([_csv_cell(v) for v in r.values()])
    return buf.getvalue()


def encode(records: Sequence[dict], fmt: str = "json") -> str:
    if fmt == "json":
        return to_jsonl(records)
    if fmt == "csv":
        return to_csv(records)
    raise ValueError(f"unknown output format {fmt!r}")
