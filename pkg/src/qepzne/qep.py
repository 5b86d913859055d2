"""Per-qubit circuit timing and qubit error probability (QEP).

For qubit j the success probability is the product of one factor per error
source that reaches it::

    P_j = 1 - (1 - P_meas)(1 - P_T1)(1 - P_T2) prod_gates (1 - P_gate)
    P_Ti = 1 - exp(-t_j / T_i)

``t_j`` is the qubit's busy time up to (not including) readout, accumulated
gate by gate; a two-qubit gate starts when the later of its two qubits is
free and leaves both at the same end time.

Gate errors spread along entanglement: at every two-qubit gate both partners
take the union of their attributed gate instances (plus the gate itself), so
an error that happened on a partner before the interaction counts for both.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .calib import CalibrationSnapshot, CalibrationWarning, warnings_for
from .circuit import Circuit, Gate, GateKind

NS_PER_US = 1000.0


class ScheduleError(ValueError):
    """A gate in the circuit has no duration (or no coupling) in the snapshot."""


@dataclass(frozen=True)
class Schedule:
    busy_ns: tuple[float, ...]  # t_j, excluding readout
    final_ns: tuple[float, ...]  # including readout of measured qubits
    starts: tuple[float, ...]  # per instruction
    ends: tuple[float, ...]


def gate_duration(g: Gate, s: CalibrationSnapshot) -> float:
    if g.is_two_qubit:
        if g.kind is not GateKind.CZ:
            raise ScheduleError(f"{g}: only native two-qubit gates can be scheduled")
        e = s.edge(*g.qubits)
        if e is None:
            raise ScheduleError(f"{g}: edge {g.edge} not in coupling map")
        return e.cz_duration_ns
    q = g.qubits[0]
    if q >= s.n_qubits:
        raise ScheduleError(f"{g}: qubit {q} not in snapshot")
    if g.kind is GateKind.MEASURE:
        return s.qubits[q].readout_ns
    cal = s.qubits[q].gates.get(g.kind.value)
    if cal is None:
        raise ScheduleError(f"{g}: no duration for {g.kind.value} on qubit {q}")
    return cal.duration_ns


def gate_error(g: Gate, s: CalibrationSnapshot) -> float:
    """Reported error of a native gate; a missing CZ error counts as certain failure."""
    if g.is_two_qubit:
        e = s.edge(*g.qubits)
        if e is None or e.cz_error is None:
            return 1.0
        return e.cz_error
    cal = s.qubits[g.qubits[0]].gates.get(g.kind.value)
    if cal is None:
        raise ScheduleError(f"{g}: no calibration for {g.kind.value} on qubit {g.qubits[0]}")
    return cal.error


def _require_native(c: Circuit) -> None:
    if not c.native:
        raise ValueError("circuit must be native (RZ/SX/X/CZ/MEASURE); run decompose_to_native first")


def schedule(c: Circuit, s: CalibrationSnapshot) -> Schedule:
    _require_native(c)
    if c.n_qubits > s.n_qubits:
        raise ScheduleError(f"circuit has {c.n_qubits} qubits, snapshot only {s.n_qubits}")
    t = [0.0] * c.n_qubits
    busy: list[float] = [0.0] * c.n_qubits
    starts, ends = [], []
    for g in c.instructions:
        d = gate_duration(g, s)
        if g.is_two_qubit:
            a, b = g.qubits
            start = max(t[a], t[b])
            t[a] = t[b] = start + d
        else:
            q = g.qubits[0]
            start = t[q]
            if g.kind is GateKind.MEASURE:
                busy[q] = start
            t[q] = start + d
        starts.append(start)
        ends.append(start + d)
    measured = set(c.measured_qubits)
    busy = [busy[q] if q in measured else t[q] for q in range(c.n_qubits)]
    return Schedule(tuple(busy), tuple(t), tuple(starts), tuple(ends))


@dataclass(frozen=True)
class QepReport:
    p: tuple[float, ...]
    t_ns: tuple[float, ...]
    include_measurement: bool
    warnings: tuple[CalibrationWarning, ...] = field(default=())

    @property
    def mu(self) -> float:
        return statistics.fmean(self.p)

    @property
    def sigma(self) -> float:
        return statistics.pstdev(self.p)

    @property
    def sigma_sq(self) -> float:
        return statistics.pvariance(self.p)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["qubit", "p_error", "t_ns"])
        for q, (p, t) in enumerate(zip(self.p, self.t_ns)):
            w.writerow([q, repr(p), repr(t)])
        w.writerow(["mu", repr(self.mu)])
        w.writerow(["sigma", repr(self.sigma)])
        return buf.getvalue()


def attributed_gates(c: Circuit) -> list[int]:
    """Bitmask per qubit of the instruction indices whose error reaches it."""
    sources = [0] * c.n_qubits
    for k, g in enumerate(c.instructions):
        if g.kind is GateKind.MEASURE:
            continue
        if g.is_two_qubit:
            a, b = g.qubits
            sources[a] = sources[b] = sources[a] | sources[b] | (1 << k)
        else:
            q = g.qubits[0]
            sources[q] |= 1 << k
    return sources


def _mask_indices(mask: int, size: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:size])


def qep(c: Circuit, s: CalibrationSnapshot, include_measurement: bool = True) -> QepReport:
    sched = schedule(c, s)
    survive = [1.0 if g.kind is GateKind.MEASURE else 1.0 - gate_error(g, s) for g in c.instructions]
    size = len(c.instructions)
    probs = []
    for j, mask in enumerate(attributed_gates(c)):
        qc = s.qubits[j]
        t = sched.busy_ns[j]
        success = math.exp(-t / (qc.t1_us * NS_PER_US)) * math.exp(-t / (qc.t2_us * NS_PER_US))
        if include_measurement:
            success *= 1.0 - qc.readout_error
        # accumulate in instruction order so results never depend on set layout
        for k in _mask_indices(mask, size).tolist():
            success *= survive[k]
        probs.append(min(1.0, max(0.0, 1.0 - success)))
    return QepReport(
        p=tuple(probs),
        t_ns=sched.busy_ns,
        include_measurement=include_measurement,
        warnings=tuple(warnings_for(c, s)),
    )


def mean_qep(report: QepReport) -> float:
    return report.mu
