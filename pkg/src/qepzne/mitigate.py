"""Noise amplification, readout mitigation and zero-noise extrapolation.

Noise is amplified by appending blocks of CZ pairs: one block puts two
consecutive CZs on every coupling edge the circuit uses. A CZ pair is the
identity, so the ideal observables are unchanged while the error budget
grows. The extrapolation variable is either the amplified circuit's mean QEP
(measurement error excluded, since readout is mitigated separately) or, for
the standard-ZNE baseline, the odd fold count ``2f + 1``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _parallel
from .calib import CalibrationSnapshot, CalibrationWarning, WarningKind, warnings_for
from .circuit import Circuit, Gate, GateKind, cz
from .qep import mean_qep, qep
from .sim import (
    NoiseModel,
    NonCliffordError,
    ObservableEstimate,
    ZExpectations,
    build_noise_model,
    exact_z_clifford,
    magnetization,
    run_density_matrix,
    simulate,
)

DEFAULT_FACTORS = (0, 1, 2, 3)


class Axis(str, enum.Enum):
    QEP = "QEP"
    FACTOR = "FACTOR"


class ZneError(ValueError):
    pass


class MissingEdgeError(ZneError):
    """The circuit uses an edge without a CZ error; carries the calibration warnings."""

    def __init__(self, warnings: Sequence[CalibrationWarning]):
        self.warnings = tuple(warnings)
        super().__init__("; ".join(w.format() for w in self.warnings))


# -- amplification ------------------------------------------------------------


def amplify(c: Circuit, factor: int, fold: str = "end") -> Circuit:
    """Add ``factor`` CZ-pair blocks.

    ``fold="end"`` appends the blocks after the last gate (before the
    measurements), edges in (min, max) order. ``fold="local"`` instead puts
    ``factor`` CZ pairs right after every CZ of the circuit, i.e. gate-level
    folding, for comparison studies.
    """
    if factor < 0:
        raise ZneError(f"amplification factor must be >= 0, got {factor}")
    if factor == 0:
        return c
    gates = list(c.gates)
    measures = [g for g in c.instructions if g.kind is GateKind.MEASURE]
    if fold == "end":
        block: list[Gate] = []
        for a, b in c.used_edges():
            block += [cz(a, b), cz(a, b)]
        gates += block * factor
    elif fold == "local":
        folded: list[Gate] = []
        for g in gates:
            folded.append(g)
            if g.kind is GateKind.CZ:
                folded += [g, g] * factor
        gates = folded
    else:
        raise ZneError(f"unknown fold placement {fold!r} (expected 'end' or 'local')")
    return Circuit(c.n_qubits, tuple(gates + measures))


# -- readout ------------------------------------------------------------------


def readout_mitigate(z: ZExpectations, s: CalibrationSnapshot, qubits: Optional[Sequence[int]] = None) -> ZExpectations:
    """Invert independent per-qubit confusion matrices.

    With p01 = P(read 1 | 0) and p10 = P(read 0 | 1) the measured value is
    ``z (1 - p01 - p10) + (p10 - p01)``; this solves for ``z``. ``qubits``
    lists the measured qubits (default: all); the others pass through.
    """
    measured = set(range(len(z)) if qubits is None else qubits)
    values, errs = [], []
    for q, (v, e) in enumerate(zip(z.values, z.stderr)):
        if q not in measured:
            values.append(v)
            errs.append(e)
            continue
        p01, p10 = s.qubits[q].readout_flips
        scale = 1.0 - p01 - p10
        if scale <= 0:
            raise ZneError(f"confusion matrix of qubit {q} is singular (p01 + p10 = {p01 + p10:g})")
        values.append((v - (p10 - p01)) / scale)
        errs.append(e / scale)
    return ZExpectations(tuple(values), tuple(errs), z.shots)


# -- fitting ------------------------------------------------------------------


def linear_fit(x: Sequence[float], y: Sequence[float], weights: Optional[Sequence[float]] = None) -> tuple[float, float]:
    """Weighted least-squares line; returns ``(slope, intercept)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    if x.shape != y.shape or x.shape != w.shape:
        raise ZneError("x, y and weights must have the same length")
    if np.any(w < 0) or not np.any(w > 0):
        raise ZneError("weights must be non-negative and not all zero")
    if np.unique(x[w > 0]).size < 2:
        raise ZneError("linear fit needs at least two distinct x values")
    sw = w.sum()
    xm = (w * x).sum() / sw
    ym = (w * y).sum() / sw
    dx = x - xm
    slope = float((w * dx * (y - ym)).sum() / (w * dx * dx).sum())
    return slope, float(ym - slope * xm)


# -- ZNE ----------------------------------------------------------------------


@dataclass(frozen=True)
class ZnePoint:
    factor: int
    x: float
    m: ObservableEstimate


@dataclass(frozen=True)
class ZneResult:
    points: tuple[ZnePoint, ...]
    slope: float
    intercept: float
    axis: Axis
    residuals: tuple[float, ...] = field(default=())

    @property
    def raw(self) -> ZnePoint:
        return next(p for p in self.points if p.factor == 0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["factor", "x", "m", "stderr"])
        for p in self.points:
            w.writerow([p.factor, repr(p.x), repr(p.m.value), repr(p.m.stderr)])
        w.writerow(["slope", repr(self.slope)])
        w.writerow(["intercept", repr(self.intercept)])
        w.writerow(["axis", self.axis.value])
        return buf.getvalue()


@dataclass(frozen=True)
class Measurement:
    """One amplified-circuit evaluation, shared by both extrapolation axes."""

    factor: int
    mean_qep: float
    m: ObservableEstimate


def _check_factors(factors: Sequence[int]) -> list[int]:
    factors = sorted(set(int(f) for f in factors))
    if any(f < 0 for f in factors):
        raise ZneError("factors must be >= 0")
    if 0 not in factors:
        raise ZneError("factors must include 0 (the raw circuit)")
    if len(factors) < 2:
        raise ZneError("ZNE needs at least two factors (two distinct x values)")
    return factors


def measure_factors(
    c: Circuit,
    s: CalibrationSnapshot,
    backend: str = "dm",
    factors: Sequence[int] = DEFAULT_FACTORS,
    shots: int = 8192,
    seed: int = 0,
    fold: str = "end",
    threads: Optional[int] = None,
) -> list[Measurement]:
    """Run every amplified circuit once; readout-mitigated magnetization per factor."""
    if not c.native:
        raise ZneError("ZNE needs a native circuit; run decompose_to_native first")
    factors = _check_factors(factors)
    missing = [w for w in warnings_for(c, s) if w.kind is WarningKind.MISSING_GATE_DATA]
    if missing:
        raise MissingEdgeError(missing)
    measured = c.measured_qubits or tuple(range(c.n_qubits))

    def evaluate(f: int) -> Measurement:
        amp = amplify(c, f, fold)
        x = mean_qep(qep(amp, s, include_measurement=False))
        nm = build_noise_model(amp, s)
        # per-factor stream so factors can run in any order
        z = simulate(amp, nm, backend, shots=shots, seed=_factor_seed(seed, f), threads=1)
        z = readout_mitigate(z, s, measured)
        m = magnetization(ZExpectations(
            tuple(z.values[q] for q in measured), tuple(z.stderr[q] for q in measured), z.shots
        ))
        return Measurement(f, x, m)

    return _parallel.ordered_map(evaluate, factors, threads)


def _factor_seed(seed: int, factor: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(factor,)).generate_state(1)[0])


def fit_zne(measurements: Sequence[Measurement], axis: Axis | str = Axis.QEP, weights: str = "none") -> ZneResult:
    axis = Axis(axis.upper() if isinstance(axis, str) else axis)
    points = tuple(
        ZnePoint(m.factor, m.mean_qep if axis is Axis.QEP else float(2 * m.factor + 1), m.m) for m in measurements
    )
    xs = [p.x for p in points]
    ys = [p.m.value for p in points]
    if weights == "none":
        w = None
    elif weights == "stderr":
        errs = [p.m.stderr for p in points]
        # exact backends have zero spread: fall back to equal weights
        w = None if not all(e > 0 for e in errs) else [1.0 / (e * e) for e in errs]
    else:
        raise ZneError(f"unknown weighting {weights!r} (expected 'none' or 'stderr')")
    slope, intercept = linear_fit(xs, ys, w)
    residuals = tuple(y - (intercept + slope * x) for x, y in zip(xs, ys))
    return ZneResult(points, slope, intercept, axis, residuals)


def zne(
    c: Circuit,
    s: CalibrationSnapshot,
    backend: str = "dm",
    factors: Sequence[int] = DEFAULT_FACTORS,
    axis: Axis | str = Axis.QEP,
    shots: int = 8192,
    seed: int = 0,
    fold: str = "end",
    weights: str = "none",
    threads: Optional[int] = None,
) -> ZneResult:
    measurements = measure_factors(c, s, backend, factors, shots, seed, fold, threads)
    return fit_zne(measurements, axis, weights)


def exact_magnetization(c: Circuit) -> float:
    """Noiseless magnetization over the measured qubits.

    Clifford circuits go through the tableau (any width), others through the
    density-matrix backend.
    """
    measured = c.measured_qubits or tuple(range(c.n_qubits))
    try:
        z = exact_z_clifford(c)
    except NonCliffordError:
        z = run_density_matrix(c, NoiseModel.noiseless(c))
    return math.fsum(z.values[q] for q in measured)
