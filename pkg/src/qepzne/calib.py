"""Calibration snapshots: data model, JSON ingestion, synthetic fixtures and
miscalibration warnings.

Units: T1/T2 in microseconds, every duration in nanoseconds, errors as
probabilities. A two-qubit gate error that the backend did not report is
kept as ``None`` (missing) rather than being folded into a number here.
"""

from __future__ import annotations

import enum
import json
import math
import statistics
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional

from .circuit import Circuit

Edge = tuple[int, int]


class SnapshotError(ValueError):
    """Schema violation in a calibration document; ``path`` locates the field."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


def edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class GateCalibration:
    error: float
    duration_ns: float


@dataclass(frozen=True)
class QubitCalibration:
    t1_us: float
    t2_us: float
    readout_error: float
    readout_ns: float
    gates: Mapping[str, GateCalibration] = field(default_factory=dict)
    p01: Optional[float] = None  # P(read 1 | prepared 0); defaults to readout_error
    p10: Optional[float] = None  # P(read 0 | prepared 1); defaults to readout_error

    @property
    def readout_flips(self) -> tuple[float, float]:
        p01 = self.readout_error if self.p01 is None else self.p01
        p10 = self.readout_error if self.p10 is None else self.p10
        return p01, p10


@dataclass(frozen=True)
class EdgeCalibration:
    q1: int
    q2: int
    cz_error: Optional[float]
    cz_duration_ns: float

    @property
    def missing(self) -> bool:
        return self.cz_error is None


@dataclass(frozen=True)
class CalibrationSnapshot:
    qubits: tuple[QubitCalibration, ...]
    edges: Mapping[Edge, EdgeCalibration]
    label: str = ""

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def coupling(self) -> list[Edge]:
        return sorted(self.edges)

    def edge(self, a: int, b: int) -> Optional[EdgeCalibration]:
        return self.edges.get(edge_key(a, b))

    def to_document(self) -> dict[str, Any]:
        qubits = []
        for qc in self.qubits:
            row: dict[str, Any] = {
                "t1_us": qc.t1_us,
                "t2_us": qc.t2_us,
                "readout_error": qc.readout_error,
                "readout_ns": qc.readout_ns,
                "gates": {
                    k: {"error": g.error, "duration_ns": g.duration_ns} for k, g in sorted(qc.gates.items())
                },
            }
            if qc.p01 is not None:
                row["p01"] = qc.p01
            if qc.p10 is not None:
                row["p10"] = qc.p10
            qubits.append(row)
        edges = []
        for key in self.coupling:
            e = self.edges[key]
            row = {"q1": e.q1, "q2": e.q2, "cz_duration_ns": e.cz_duration_ns}
            if e.cz_error is not None:
                row["cz_error"] = e.cz_error
            edges.append(row)
        return {"label": self.label, "qubits": qubits, "edges": edges}

    def dumps(self) -> str:
        return json.dumps(self.to_document(), indent=2)


# -- ingestion ---------------------------------------------------------------


def _number(obj: Mapping[str, Any], key: str, path: str, *, positive: bool = False,
            probability: bool = False, required: bool = True) -> Optional[float]:
    if key not in obj or obj[key] is None:
        if required:
            raise SnapshotError(f"{path}.{key}", "missing required field")
        return None
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SnapshotError(f"{path}.{key}", f"expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise SnapshotError(f"{path}.{key}", "must be finite")
    if positive and value <= 0:
        raise SnapshotError(f"{path}.{key}", f"must be > 0, got {value}")
    if probability and not 0 <= value < 1:
        raise SnapshotError(f"{path}.{key}", f"must be in [0, 1), got {value}")
    if not positive and not probability and value < 0:
        raise SnapshotError(f"{path}.{key}", f"must be >= 0, got {value}")
    return value


def _mapping(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise SnapshotError(path, f"expected an object, got {type(value).__name__}")
    return value


def snapshot_from_document(doc: Any) -> CalibrationSnapshot:
    doc = _mapping(doc, "$")
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise SnapshotError("label", "expected a string")
    raw_qubits = doc.get("qubits")
    if not isinstance(raw_qubits, list) or not raw_qubits:
        raise SnapshotError("qubits", "expected a non-empty array")

    qubits = []
    for i, raw in enumerate(raw_qubits):
        path = f"qubits[{i}]"
        raw = _mapping(raw, path)
        gates = {}
        for kind, graw in _mapping(raw.get("gates", {}), f"{path}.gates").items():
            gpath = f"{path}.gates.{kind}"
            graw = _mapping(graw, gpath)
            gates[kind] = GateCalibration(
                error=_number(graw, "error", gpath, probability=True),
                duration_ns=_number(graw, "duration_ns", gpath),
            )
        qubits.append(
            QubitCalibration(
                t1_us=_number(raw, "t1_us", path, positive=True),
                t2_us=_number(raw, "t2_us", path, positive=True),
                readout_error=_number(raw, "readout_error", path, probability=True),
                readout_ns=_number(raw, "readout_ns", path, positive=True),
                gates=gates,
                p01=_number(raw, "p01", path, probability=True, required=False),
                p10=_number(raw, "p10", path, probability=True, required=False),
            )
        )

    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise SnapshotError("edges", "expected an array")
    edges: dict[Edge, EdgeCalibration] = {}
    for i, raw in enumerate(raw_edges):
        path = f"edges[{i}]"
        raw = _mapping(raw, path)
        ends = []
        for key in ("q1", "q2"):
            value = raw.get(key)
            if isinstance(value, bool) or not isinstance(value, int):
                raise SnapshotError(f"{path}.{key}", "expected an integer qubit index")
            if not 0 <= value < len(qubits):
                raise SnapshotError(f"{path}.{key}", f"qubit {value} out of range")
            ends.append(value)
        if ends[0] == ends[1]:
            raise SnapshotError(path, "edge joins a qubit to itself")
        key = edge_key(*ends)
        if key in edges:
            raise SnapshotError(path, f"duplicate edge {key}")
        edges[key] = EdgeCalibration(
            q1=key[0],
            q2=key[1],
            cz_error=_number(raw, "cz_error", path, probability=True, required=False),
            cz_duration_ns=_number(raw, "cz_duration_ns", path, positive=True),
        )
    return CalibrationSnapshot(qubits=tuple(qubits), edges=edges, label=label)


def load_snapshot(document: str) -> CalibrationSnapshot:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SnapshotError("$", f"not valid JSON ({exc})") from None
    return snapshot_from_document(doc)


# -- synthetic fixtures ------------------------------------------------------


@dataclass(frozen=True)
class SnapshotProfile:
    """Uniform device parameters for :func:`synthetic_snapshot`."""

    t1: float = 100.0  # us
    t2: float = 100.0  # us
    sq_error: float = 3e-4
    cz_error: float = 3e-3
    sq_duration: float = 50.0  # ns
    cz_duration: float = 200.0  # ns
    readout_error: float = 1e-2
    readout_duration: float = 1000.0  # ns

    def scaled(self, k: float) -> "SnapshotProfile":
        """Multiply every error rate by ``k`` (gate errors and 1/T1, 1/T2); readout untouched."""
        return replace(
            self,
            t1=self.t1 / k,
            t2=self.t2 / k,
            sq_error=self.sq_error * k,
            cz_error=self.cz_error * k,
        )


def synthetic_snapshot(n: int, profile: SnapshotProfile = SnapshotProfile(), label: str = "") -> CalibrationSnapshot:
    """Uniform snapshot on a linear chain of ``n`` qubits.

    RZ is a virtual (frame-change) gate: zero duration, zero error.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = profile
    sq = GateCalibration(error=p.sq_error, duration_ns=p.sq_duration)
    gates = {"rz": GateCalibration(error=0.0, duration_ns=0.0), "sx": sq, "x": sq}
    qubit = QubitCalibration(
        t1_us=p.t1, t2_us=p.t2, readout_error=p.readout_error, readout_ns=p.readout_duration, gates=gates
    )
    edges = {
        (i, i + 1): EdgeCalibration(i, i + 1, p.cz_error, p.cz_duration) for i in range(n - 1)
    }
    return CalibrationSnapshot(qubits=(qubit,) * n, edges=edges, label=label or f"synthetic-{n}q")


def with_edge_error(s: CalibrationSnapshot, a: int, b: int, error: Optional[float]) -> CalibrationSnapshot:
    """Copy of ``s`` with one edge's CZ error replaced (``None`` marks it missing)."""
    key = edge_key(a, b)
    edges = dict(s.edges)
    edges[key] = replace(edges[key], cz_error=error)
    return replace(s, edges=edges)


# -- warnings ----------------------------------------------------------------


class WarningKind(str, enum.Enum):
    POORLY_CALIBRATED_GATE = "POORLY_CALIBRATED_GATE"
    MISSING_GATE_DATA = "MISSING_GATE_DATA"
    T2_EXCEEDS_2T1 = "T2_EXCEEDS_2T1"


@dataclass(frozen=True)
class CalibrationWarning:
    kind: WarningKind
    location: str  # "q3" or "3-4"
    detail: str

    def format(self) -> str:
        return f"WARN {self.kind.value} {self.location} {self.detail}"


def warnings_for(c: Circuit, s: CalibrationSnapshot) -> list[CalibrationWarning]:
    """Miscalibration warnings for the edges and qubits a circuit touches.

    A used edge is flagged as poorly calibrated when its CZ error exceeds
    twice the mean CZ error of the distinct used edges (missing ones excluded).
    """
    out: list[CalibrationWarning] = []
    used = c.used_edges()
    known: dict[Edge, float] = {}
    for a, b in used:
        e = s.edge(a, b)
        if e is None:
            out.append(CalibrationWarning(WarningKind.MISSING_GATE_DATA, f"{a}-{b}", "edge not in coupling map"))
        elif e.missing:
            out.append(CalibrationWarning(WarningKind.MISSING_GATE_DATA, f"{a}-{b}", "no cz_error reported"))
        else:
            known[(a, b)] = e.cz_error
    if known:
        mean = statistics.fmean(known.values())
        for (a, b), err in known.items():
            if err > 2 * mean:
                out.append(
                    CalibrationWarning(
                        WarningKind.POORLY_CALIBRATED_GATE,
                        f"{a}-{b}",
                        f"cz_error={err:.6g} exceeds 2x mean {mean:.6g} of used edges",
                    )
                )
    for q in range(min(c.n_qubits, s.n_qubits)):
        qc = s.qubits[q]
        if qc.t2_us > 2 * qc.t1_us:
            out.append(
                CalibrationWarning(
                    WarningKind.T2_EXCEEDS_2T1, f"q{q}", f"t2={qc.t2_us:g}us > 2*t1={2 * qc.t1_us:g}us"
                )
            )
    return out
