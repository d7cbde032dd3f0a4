"""Command-line front end.

Subcommands: run, compare, leakage, filter, feasibility, sample. Every
subcommand writes newline-delimited JSON (default) or CSV to ``--output`` or
stdout. Exit status: 0 when every checked invariant held, 1 when one failed,
2 for usage errors.

Flags can also come from ``--config FILE`` holding ``key = value`` lines,
one per flag (``phi-steps = 8``); command-line flags win over the file.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, report
from .branches import IncompatibleChannel, ProtocolId, enumerate_branches
from .ensembles import ChannelKind, ChannelSpec, Ensemble, make_secret
from .protocols import admissible, run_controlled, run_protocol

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2
DEFAULT_STEPS = 8
NORMALIZE_SLACK = 1e-6


class UsageError(Exception):
    pass


def _linspace(start: float, stop: float, steps: int) -> list[float]:
    if steps < 1:
        raise UsageError("grid steps must be >= 1")
    return [float(x) for x in np.linspace(start, stop, steps)]


def _phi_values(args) -> list[float]:
    if args.phi is not None and args.phi_steps is None:
        return [args.phi]
    n = args.phi_steps or DEFAULT_STEPS
    start = args.phi_start if args.phi_start is not None else 0.0
    stop = args.phi_stop if args.phi_stop is not None else 2 * math.pi * (n - 1) / n
    return _linspace(start, stop, n)


def _theta_values(args) -> list[float]:
    if args.theta is not None and args.theta_steps is None:
        return [args.theta]
    n = args.theta_steps or DEFAULT_STEPS
    start = args.theta_start if args.theta_start is not None else 0.0
    stop = args.theta_stop if args.theta_stop is not None else math.pi
    return _linspace(start, stop, n)


def build_grid(args):
    ens = Ensemble(args.ensemble)
    try:
        if ens is Ensemble.EQUATORIAL:
            return [make_secret(ens, math.pi / 2, p) for p in _phi_values(args)]
        if ens is Ensemble.REAL:
            phi = args.phi if args.phi is not None else 0.0
            return [make_secret(ens, t, phi) for t in _theta_values(args)]
        return [make_secret(ens, t, p) for t in _theta_values(args) for p in _phi_values(args)]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _normalized(params: list[float]) -> list[float]:
    norm = math.sqrt(sum(p * p for p in params))
    if abs(norm - 1.0) > NORMALIZE_SLACK:
        raise UsageError(f"channel coefficients {params} are not normalized (norm {norm:.9g})")
    return [p / norm for p in params]


def build_channel(args, protocol: ProtocolId) -> ChannelSpec:
    kind = args.channel
    try:
        if kind is None:
            from .branches import default_channel

            return default_channel(protocol)
        kind = ChannelKind(kind)
        if kind is ChannelKind.GHZ:
            return ChannelSpec.ghz()
        if kind is ChannelKind.ASYM_W:
            return ChannelSpec.asym_w()
        if not args.channel_params:
            raise UsageError(f"--channel {kind.value} needs --channel-params")
        params = _normalized([float(x) for x in args.channel_params.split(",")])
        return ChannelSpec(kind, tuple(params))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _protocol(name: str) -> ProtocolId:
    try:
        return ProtocolId(name.strip().lower())
    except ValueError:
        raise UsageError(f"unknown protocol {name!r}; choose from zc1, zc2, hbb, zheng") from None


def _runs(protocol: ProtocolId, args):
    channel = build_channel(args, protocol)
    grid = build_grid(args)
    runs = []
    for s in grid:
        try:
            if args.controlled:
                runs.append(run_controlled(protocol, s, channel, withhold_alice_message=True))
            else:
                runs.append(run_protocol(protocol, s, channel))
        except IncompatibleChannel as exc:
            raise UsageError(str(exc)) from exc
    return runs


def _run_ok(run, tol: float) -> bool:
    if run.controlled or not admissible(run.protocol, run.secret, run.channel):
        return True
    return run.min_fidelity >= 1 - tol


def cmd_run(args):
    runs = _runs(_protocol(args.protocol), args)
    rows = [r for run in runs for r in report.branch_records(run)] if args.per_branch else [
        report.run_record(run) for run in runs
    ]
    return rows, all(_run_ok(r, args.fidelity_tol) for r in runs)


def cmd_compare(args):
    protocols = [_protocol(p) for p in args.protocols.split(",") if p.strip()]
    if len(protocols) < 2:
        raise UsageError("--protocols needs at least two comma-separated names")
    if args.channel is not None:
        raise UsageError("compare uses each protocol's own maximal channel; drop --channel")
    per_protocol = [_runs(p, args) for p in protocols]
    rows, ok = [], True
    for point in zip(*per_protocol):
        for run in point:
            rows.append(report.run_record(run))
            ok &= _run_ok(run, args.fidelity_tol)
    return rows, ok


def cmd_leakage(args):
    protocol = _protocol(args.protocol)
    channel = build_channel(args, protocol)
    grid = build_grid(args)
    try:
        rep = analysis.leakage_report(protocol, grid, channel)
    except IncompatibleChannel as exc:
        raise UsageError(str(exc)) from exc
    ok = all(
        0.0 <= d <= 1.0
        for d in (rep.max_pairwise_trace_distance_b, rep.max_pairwise_trace_distance_c)
    )
    if protocol is ProtocolId.ZC1 and Ensemble(args.ensemble) is Ensemble.EQUATORIAL and channel.is_maximal:
        ok &= max(rep.max_distance_from_mixed_b, rep.max_distance_from_mixed_c) < args.fidelity_tol
    return report.leakage_records(rep), ok


def _filter_coefficients(args) -> tuple[float, float]:
    if args.a2 is not None:
        if not 0 < args.a2 < 1:
            raise UsageError("--a2 must lie strictly between 0 and 1")
        return math.sqrt(args.a2), math.sqrt(1 - args.a2)
    if args.a is not None:
        if not 0 < args.a < 1:
            raise UsageError("--a must lie strictly between 0 and 1")
        return args.a, math.sqrt(1 - args.a**2)
    raise UsageError("filter needs --a2 or --a")


def cmd_filter(args):
    a, b = _filter_coefficients(args)
    if Ensemble(args.ensemble) is Ensemble.ARBITRARY:
        raise UsageError("filter needs --ensemble equatorial or real")
    grid = build_grid(args)
    rows, ok = [], True
    for s in grid:
        run = analysis.nonmax_ghz_recovery(s, a, b)
        rows.append(report.filter_record(run))
        ok &= run.success_fidelity >= 1 - args.fidelity_tol
        ok &= abs(run.overall_success_probability - run.predicted_success_probability) <= args.fidelity_tol
    return rows, ok


def cmd_feasibility(args):
    if None in (args.a, args.b, args.c):
        raise UsageError("feasibility needs --a, --b and --c")
    if min(args.a, args.b, args.c) <= 0:
        raise UsageError("W coefficients must be positive")
    a, b, c = _normalized([args.a, args.b, args.c])
    res = analysis.general_w_feasibility(a, b, c)
    # Structural check is exact at 1e-10; near-points may pass fidelity only.
    return [report.feasibility_record(res)], 0.0 <= res.min_fidelity <= 1 + 1e-10


def cmd_sample(args):
    if args.seed is None:
        raise UsageError("sample needs --seed")
    protocol = _protocol(args.protocol)
    channel = build_channel(args, protocol)
    rng = np.random.default_rng(args.seed)
    rows = []
    for s in build_grid(args):
        run = run_protocol(protocol, s, channel)
        probs = np.array([b.probability for b in run.branches])
        picks = rng.choice(len(run.branches), size=args.shots, p=probs / probs.sum())
        for shot, i in enumerate(picks):
            br = run.branches[i]
            rows.append(
                {
                    "protocol": protocol.value,
                    "ensemble": s.ensemble.value,
                    "theta": report.fmt_float(s.theta),
                    "phi": report.fmt_float(s.phi),
                    "shot": shot,
                    "branch_key": "|".join(br.key),
                    "corrections": "+".join(br.op_names),
                    "fidelity": report.fmt_float(br.fidelity),
                }
            )
    return rows, True


def _add_grid(p, ensemble_default="equatorial"):
    p.add_argument("--ensemble", choices=[e.value for e in Ensemble], default=ensemble_default)
    for name in ("theta", "phi"):
        p.add_argument(f"--{name}", type=float, help="single angle in radians")
        p.add_argument(f"--{name}-start", type=float)
        p.add_argument(f"--{name}-stop", type=float)
        p.add_argument(f"--{name}-steps", type=int)


def _add_output(p):
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", help="report file (default: stdout)")
    p.add_argument("--config", help="key = value file mirroring these flags")
    p.add_argument("--fidelity-tol", type=float, default=1e-10)


def _add_channel(p):
    p.add_argument("--channel", choices=[k.value for k in ChannelKind])
    p.add_argument("--channel-params", help="comma-separated real coefficients")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qisplit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one protocol over a grid of secrets")
    p.add_argument("--protocol", required=True)
    p.add_argument("--controlled", action="store_true", help="withhold the sender's message")
    p.add_argument("--per-branch", action="store_true", help="one record per branch")
    _add_grid(p), _add_channel(p), _add_output(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="paired runs of several protocols")
    p.add_argument("--protocols", required=True, help="e.g. zc1,hbb")
    _add_grid(p), _add_channel(p), _add_output(p)
    p.set_defaults(func=cmd_compare, controlled=False)

    p = sub.add_parser("leakage", help="receivers' marginal states per announcement")
    p.add_argument("--protocol", required=True)
    _add_grid(p), _add_channel(p), _add_output(p)
    p.set_defaults(func=cmd_leakage)

    p = sub.add_parser("filter", help="filtered recovery over a non-maximal GHZ channel")
    p.add_argument("--a2", type=float, help="weight a^2 of |000>")
    p.add_argument("--a", type=float, help="amplitude a of |000>")
    _add_grid(p), _add_output(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("feasibility", help="does ZC2 still work over a|001>+b|010>+c|100>")
    for name in ("a", "b", "c"):
        p.add_argument(f"--{name}", type=float)
    _add_output(p)
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("sample", help="seeded random outcomes (demonstration only)")
    p.add_argument("--protocol", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--shots", type=int, default=10)
    _add_grid(p), _add_channel(p), _add_output(p)
    p.set_defaults(func=cmd_sample)
    return parser


def _bool_flags(parser: argparse.ArgumentParser, command: str) -> set[str]:
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return {
        act.option_strings[0]
        for act in sub.choices[command]._actions
        if isinstance(act, argparse._StoreTrueAction)
    }


def config_args(path: str, command: str, parser: argparse.ArgumentParser) -> list[str]:
    """Translate a ``key = value`` config file into command-line flags."""
    bools = _bool_flags(parser, command)
    out = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if flag == "--seed" and command != "sample":
            raise UsageError(f"{path}:{lineno}: seed is only allowed with the sample subcommand")
        if flag == "--config":
            raise UsageError(f"{path}:{lineno}: config files cannot include other config files")
        if flag in bools:
            if value.lower() in ("true", "1", "yes"):
                out.append(flag)
            elif value.lower() not in ("false", "0", "no"):
                raise UsageError(f"{path}:{lineno}: {key} takes true/false")
        else:
            out += [flag, value]
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            extra = config_args(args.config, args.command, parser)
            args = parser.parse_args([argv[0], *extra, *argv[1:]])
        rows, ok = args.func(args)
    except UsageError as exc:
        print(f"qisplit {argv[0] if argv else ''}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    text = report.encode(rows, args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if not ok:
        print("qisplit: invariant check failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
