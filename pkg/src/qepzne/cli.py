"""Command-line front end.

Every command writes CSV (or circuit text) preceded by ``#`` comment lines
recording how to reproduce it. Only the comment lines may differ between two
runs with the same inputs and seed.

Exit codes: 0 success, 1 usage, 2 input/schema error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import io
import math
import re
import shlex
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .calib import CalibrationSnapshot, SnapshotError, SnapshotProfile, load_snapshot, synthetic_snapshot
from .circuit import (
    Circuit,
    CircuitError,
    TrotterParams,
    build_trotter_ising,
    chain_edges,
    decompose_to_native,
    parse,
    prune_identity,
    serialize,
)
from .mitigate import (
    DEFAULT_FACTORS,
    Axis,
    MissingEdgeError,
    ZneError,
    exact_magnetization,
    fit_zne,
    measure_factors,
    readout_mitigate,
)
from .qep import ScheduleError, qep
from .sim import MissingCalibrationError, SimulationError, build_noise_model, simulate

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default; usage errors are 1 here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


_PI_EXPR = re.compile(r"([+-]?)(\d+(?:\.\d*)?|\.\d+)?\*?pi(?:/(\d+(?:\.\d*)?|\.\d+))?")


def parse_real(text: str) -> float:
    """Float literal, or a multiple/fraction of pi: ``pi``, ``-pi/2``, ``2*pi``, ``0.5pi``."""
    t = text.strip().lower().replace(" ", "")
    try:
        return float(t)
    except ValueError:
        pass
    m = _PI_EXPR.fullmatch(t)
    if not m:
        raise argparse.ArgumentTypeError(f"not a number or pi expression: {text!r}")
    sign, mult, div = m.groups()
    value = math.pi * (float(mult) if mult else 1.0) / (float(div) if div else 1.0)
    return -value if sign == "-" else value


def _factor_list(text: str) -> list[int]:
    try:
        factors = [int(f) for f in text.split(",") if f.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"factors must be comma-separated integers, got {text!r}") from None
    return factors


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_circuit(path: str) -> Circuit:
    return parse(_read_text(path))


def _load_snapshot(path: str) -> CalibrationSnapshot:
    return load_snapshot(_read_text(path))


def _read_edges(path: str) -> list[tuple[int, int]]:
    edges = []
    for lineno, raw in enumerate(_read_text(path).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise CircuitError(f"{path} line {lineno}: expected 'i j'")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise CircuitError(f"{path} line {lineno}: qubit indices must be integers") from None
        edges.append((a, b))
    return edges


def _header(args: argparse.Namespace, argv: Sequence[str], **fields) -> str:
    lines = [f"# qepzne {__version__} {args.command}", f"# argv: {shlex.join(argv)}"]
    lines.extend(f"# {k}={v}" for k, v in fields.items())
    lines.append(f"# created={_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}")
    return "\n".join(lines) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _native(c: Circuit) -> Circuit:
    return c if c.native else decompose_to_native(c)


# -- commands -----------------------------------------------------------------


def cmd_gen_trotter(args, argv) -> int:
    edges = _read_edges(args.edges) if args.edges else chain_edges(args.qubits)
    params = TrotterParams(args.qubits, args.steps, args.dt, args.J, args.h, tuple(edges))
    c = build_trotter_ising(params)
    if args.native:
        c = decompose_to_native(c)
    if args.prune_identity:
        c = prune_identity(c)
    body = serialize(c)
    header = _header(args, argv, native=int(c.native))
    _emit(header + body, args.output)
    return EXIT_OK


def cmd_qep(args, argv) -> int:
    c = _native(_load_circuit(args.circuit))
    s = _load_snapshot(args.calib)
    report = qep(c, s, include_measurement=args.include_measurement)
    for w in report.warnings:
        print(w.format(), file=sys.stderr)
    header = _header(args, argv, snapshot=s.label, include_measurement=int(args.include_measurement))
    _emit(header + report.to_csv(), args.output)
    return EXIT_OK


def cmd_simulate(args, argv) -> int:
    c = _native(_load_circuit(args.circuit))
    s = _load_snapshot(args.calib)
    nm = build_noise_model(c, s)
    z = simulate(c, nm, args.backend, shots=args.shots, seed=args.seed)
    if args.mitigate_readout:
        z = readout_mitigate(z, s, c.measured_qubits or None)
    header = _header(args, argv, snapshot=s.label)
    _emit(header + z.to_csv(args.backend, args.seed if args.backend == "stab" else None), args.output)
    return EXIT_OK


def _zne_measurements(c: Circuit, s: CalibrationSnapshot, args):
    return measure_factors(
        c, s, backend=args.backend, factors=args.factors, shots=args.shots, seed=args.seed, fold=args.fold
    )


def _check_factor_args(factors: Sequence[int]) -> None:
    distinct = set(factors)
    if len(distinct) < 2:
        raise UsageError("--factors needs at least two values (one of them 0)")
    if 0 not in distinct:
        raise UsageError("--factors must include 0 (the raw circuit)")
    if min(distinct) < 0:
        raise UsageError("--factors must be non-negative")


def cmd_zne(args, argv) -> int:
    _check_factor_args(args.factors)
    c = _native(_load_circuit(args.circuit))
    s = _load_snapshot(args.calib)
    result = fit_zne(_zne_measurements(c, s, args), args.axis, args.weights)
    header = _header(args, argv, snapshot=s.label, seed=args.seed, backend=args.backend)
    _emit(header + result.to_csv(), args.output)
    return EXIT_OK


def cmd_sweep(args, argv) -> int:
    _check_factor_args(args.factors)
    if args.calib:
        s = _load_snapshot(args.calib)
    else:
        s = synthetic_snapshot(args.qubits, SnapshotProfile().scaled(args.scale))
    buf = io.StringIO()
    buf.write("steps,raw_mean_qep,m_raw,m_zne_factor,m_zne_qep,m_exact\n")
    for steps in range(args.steps_from, args.steps_to + 1):
        params = TrotterParams.chain(args.qubits, steps, args.dt, args.J, args.h)
        c = decompose_to_native(build_trotter_ising(params))
        ms = _zne_measurements(c, s, args)
        by_factor = fit_zne(ms, Axis.FACTOR, args.weights)
        by_qep = fit_zne(ms, Axis.QEP, args.weights)
        buf.write(
            f"{steps},{ms[0].mean_qep!r},{ms[0].m.value!r},{by_factor.intercept!r},"
            f"{by_qep.intercept!r},{exact_magnetization(c)!r}\n"
        )
    header = _header(args, argv, snapshot=s.label, seed=args.seed, backend=args.backend)
    _emit(header + buf.getvalue(), args.output)
    return EXIT_OK


def cmd_synth_calib(args, argv) -> int:
    profile = SnapshotProfile(
        t1=args.t1, t2=args.t2, sq_error=args.sq_error, cz_error=args.cz_error,
        sq_duration=args.sq_duration, cz_duration=args.cz_duration,
        readout_error=args.readout_error, readout_duration=args.readout_duration,
    ).scaled(args.scale)
    _emit(synthetic_snapshot(args.qubits, profile).dumps() + "\n", args.output)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be >= 0")
    return value


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=["dm", "stab"], default="stab")
    p.add_argument("--factors", type=_factor_list, default=list(DEFAULT_FACTORS))
    p.add_argument("--shots", type=_positive_int, default=8192)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--fold", choices=["end", "local"], default="end")
    p.add_argument("--weights", choices=["none", "stderr"], default="none")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qepzne", description="Qubit error probability and QEP-guided zero-noise extrapolation.")
    parser.add_argument("--version", action="version", version=f"qepzne {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-trotter", help="write a Trotterized transverse-field Ising circuit")
    p.add_argument("--qubits", type=_positive_int, required=True)
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--dt", type=parse_real, required=True)
    p.add_argument("--J", type=parse_real, required=True)
    p.add_argument("--h", type=parse_real, required=True)
    topo = p.add_mutually_exclusive_group()
    topo.add_argument("--chain", action="store_true", help="linear chain (default)")
    topo.add_argument("--edges", metavar="FILE", help="edge list, one 'i j' per line")
    p.add_argument("--native", action="store_true", help="lower to RZ/SX/X/CZ")
    p.add_argument("--prune-identity", action="store_true", help="drop zero-angle rotations")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_trotter)

    p = sub.add_parser("qep", help="per-qubit error probability report")
    p.add_argument("--circuit", required=True)
    p.add_argument("--calib", required=True)
    p.add_argument("--include-measurement", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_qep)

    p = sub.add_parser("simulate", help="noisy per-qubit <Z> expectations")
    p.add_argument("--circuit", required=True)
    p.add_argument("--calib", required=True)
    p.add_argument("--backend", choices=["dm", "stab"], default="stab")
    p.add_argument("--shots", type=_positive_int, default=8192)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--mitigate-readout", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("zne", help="zero-noise extrapolation of the magnetization")
    p.add_argument("--circuit", required=True)
    p.add_argument("--calib", required=True)
    p.add_argument("--axis", choices=["qep", "factor"], default="qep", type=str.lower)
    _add_run_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_zne)

    p = sub.add_parser("sweep", help="raw / standard ZNE / QEP ZNE table over Trotter steps")
    p.add_argument("--qubits", type=_positive_int, default=8)
    p.add_argument("--steps-from", type=_positive_int, default=1)
    p.add_argument("--steps-to", type=_positive_int, default=15)
    p.add_argument("--dt", type=parse_real, default=0.25)
    p.add_argument("--J", type=parse_real, default=math.pi)
    p.add_argument("--h", type=parse_real, default=0.0)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--calib", help="snapshot file (default: synthetic chain)")
    src.add_argument("--scale", type=float, default=1.0, help="error scale of the synthetic snapshot")
    _add_run_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    d = SnapshotProfile()
    p = sub.add_parser("synth-calib", help="write a uniform synthetic calibration snapshot")
    p.add_argument("--qubits", type=_positive_int, required=True)
    p.add_argument("--t1", type=float, default=d.t1)
    p.add_argument("--t2", type=float, default=d.t2)
    p.add_argument("--sq-error", type=float, default=d.sq_error)
    p.add_argument("--cz-error", type=float, default=d.cz_error)
    p.add_argument("--sq-duration", type=float, default=d.sq_duration)
    p.add_argument("--cz-duration", type=float, default=d.cz_duration)
    p.add_argument("--readout-error", type=float, default=d.readout_error)
    p.add_argument("--readout-duration", type=float, default=d.readout_duration)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth_calib)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "axis", None):
        args.axis = args.axis.upper()
    try:
        return args.func(args, argv)
    except UsageError as exc:
        print(f"qepzne {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingEdgeError as exc:
        for w in exc.warnings:
            print(w.format(), file=sys.stderr)
        return EXIT_INPUT
    except (OSError, SnapshotError, CircuitError, ScheduleError, MissingCalibrationError, ZneError) as exc:
        print(f"qepzne {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SimulationError, ValueError) as exc:
        print(f"qepzne {args.command}: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
