"""Noise model derived from a calibration snapshot and the circuit schedule.

The model is the circuit itself with channels interleaved:

* before a gate, each of its qubits decays over the idle gap since its
  previous operation;
* after a gate, a depolarizing channel fed by the reported gate error, then
  decay over the gate's own duration;
* at readout, independent classical bit flips.

Decay over an interval ``dt`` is amplitude damping with
``gamma = 1 - exp(-dt/T1)`` followed by pure dephasing with
``lam = 1 - exp(-dt/T_phi)``, ``1/T_phi = max(0, 1/T2 - 1/(2 T1))``. The
dephasing multiplies coherences by ``1 - lam`` (a Z flip with probability
``lam/2``), so together with the damping coherences decay as ``exp(-dt/T2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from ..calib import CalibrationSnapshot
from ..circuit import Circuit, Gate, GateKind
from ..qep import NS_PER_US, Schedule, schedule as make_schedule


class MissingCalibrationError(ValueError):
    """A gate the circuit uses has no error rate, so no channel can be built."""


@dataclass(frozen=True)
class GateOp:
    gate: Gate


@dataclass(frozen=True)
class Depolarize:
    """rho -> (1 - p) rho + p I/d  on ``qubits`` (d = 2 ** len(qubits))."""

    qubits: tuple[int, ...]
    p: float


@dataclass(frozen=True)
class Relax:
    qubit: int
    gamma: float


@dataclass(frozen=True)
class Dephase:
    qubit: int
    lam: float


NoisyOp = Union[GateOp, Depolarize, Relax, Dephase]


@dataclass(frozen=True)
class NoiseModel:
    n_qubits: int
    ops: tuple[NoisyOp, ...]
    readout: tuple[tuple[float, float], ...]  # per qubit (p01, p10); (0, 0) if not measured

    def channel_probabilities(self) -> list[float]:
        out = []
        for op in self.ops:
            if isinstance(op, Depolarize):
                out.append(op.p)
            elif isinstance(op, Relax):
                out.append(op.gamma)
            elif isinstance(op, Dephase):
                out.append(op.lam)
        for p01, p10 in self.readout:
            out.extend((p01, p10))
        return out

    @classmethod
    def noiseless(cls, c: Circuit) -> "NoiseModel":
        return cls(c.n_qubits, tuple(GateOp(g) for g in c.gates), ((0.0, 0.0),) * c.n_qubits)


def depolarizing_from_error(r: float, n_qubits: int) -> float:
    """Depolarizing probability whose average gate infidelity equals ``r``: p = r d / (d - 1)."""
    d = 2**n_qubits
    p = r * d / (d - 1)
    if not 0 <= p <= 1:
        raise ValueError(f"gate error {r} too large for a {n_qubits}-qubit depolarizing channel")
    return p


def relaxation_gamma(dt_ns: float, t1_us: float) -> float:
    return -math.expm1(-dt_ns / (t1_us * NS_PER_US))


def dephasing_lambda(dt_ns: float, t1_us: float, t2_us: float) -> float:
    rate = max(0.0, 1.0 / t2_us - 1.0 / (2.0 * t1_us))  # 1/T_phi in 1/us
    if rate == 0.0:
        return 0.0
    return -math.expm1(-dt_ns * rate / NS_PER_US)


def _gate_error(g: Gate, s: CalibrationSnapshot) -> float:
    if g.is_two_qubit:
        e = s.edge(*g.qubits)
        if e is None or e.cz_error is None:
            raise MissingCalibrationError(f"no cz_error for edge {g.edge[0]}-{g.edge[1]}")
        return e.cz_error
    cal = s.qubits[g.qubits[0]].gates.get(g.kind.value)
    if cal is None:
        raise MissingCalibrationError(f"no {g.kind.value} calibration on qubit {g.qubits[0]}")
    return cal.error


def build_noise_model(c: Circuit, s: CalibrationSnapshot, sched: Optional[Schedule] = None) -> NoiseModel:
    sched = sched if sched is not None else make_schedule(c, s)
    last = [0.0] * c.n_qubits
    ops: list[NoisyOp] = []

    def decay(q: int, dt: float) -> None:
        if dt <= 0:
            return
        qc = s.qubits[q]
        ops.append(Relax(q, relaxation_gamma(dt, qc.t1_us)))
        ops.append(Dephase(q, dephasing_lambda(dt, qc.t1_us, qc.t2_us)))

    for k, g in enumerate(c.instructions):
        if g.kind is GateKind.MEASURE:
            continue
        start, end = sched.starts[k], sched.ends[k]
        for q in g.qubits:
            decay(q, start - last[q])
        ops.append(GateOp(g))
        ops.append(Depolarize(g.qubits, depolarizing_from_error(_gate_error(g, s), len(g.qubits))))
        for q in g.qubits:
            decay(q, end - start)
            last[q] = end

    measured = set(c.measured_qubits)
    readout = tuple(s.qubits[q].readout_flips if q in measured else (0.0, 0.0) for q in range(c.n_qubits))
    return NoiseModel(c.n_qubits, tuple(ops), readout)


__all__ = [
    "Dephase",
    "Depolarize",
    "GateOp",
    "MissingCalibrationError",
    "NoiseModel",
    "NoisyOp",
    "Relax",
    "build_noise_model",
    "depolarizing_from_error",
    "dephasing_lambda",
    "relaxation_gamma",
]
