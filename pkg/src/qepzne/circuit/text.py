"""Line-oriented text format for circuits.

    qubits 3
    rzz 0 1 -1.5707963267948966
    rx 2 0.0      # comments start with '#'
    measure 0

Angles are written with ``repr`` so that parsing gives back the same floats.
"""

from __future__ import annotations

from .ir import Circuit, CircuitError, Gate, GateKind


class CircuitParseError(CircuitError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


def serialize(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}"]
    lines.extend(str(g) for g in c.instructions)
    return "\n".join(lines) + "\n"


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise CircuitParseError(lineno, f"bad {what} {token!r}") from None
    if value < 0:
        raise CircuitParseError(lineno, f"negative {what} {value}")
    return value


def _parse_angle(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise CircuitParseError(lineno, f"bad angle {token!r}") from None


def parse(text: str) -> Circuit:
    n_qubits = None
    gates: list[Gate] = []
    measured: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, *args = line.split()
        if n_qubits is None:
            if name != "qubits" or len(args) != 1:
                raise CircuitParseError(lineno, "expected header 'qubits N'")
            n_qubits = _parse_int(args[0], lineno, "qubit count")
            if n_qubits < 1:
                raise CircuitParseError(lineno, "qubit count must be >= 1")
            continue
        if name == "qubits":
            raise CircuitParseError(lineno, "duplicate 'qubits' header")
        try:
            kind = GateKind(name)
        except ValueError:
            raise CircuitParseError(lineno, f"unknown gate {name!r}") from None
        expected = kind.arity + (1 if kind.parametric else 0)
        if len(args) != expected:
            raise CircuitParseError(lineno, f"{name} expects {expected} argument(s), got {len(args)}")
        qubits = tuple(_parse_int(a, lineno, "qubit") for a in args[: kind.arity])
        if kind.arity == 2 and qubits[0] == qubits[1]:
            raise CircuitParseError(lineno, f"duplicate-qubit {qubits[0]} in {name}")
        for q in qubits:
            if q >= n_qubits:
                raise CircuitParseError(lineno, f"qubit {q} out of range for {n_qubits} qubits")
        theta = _parse_angle(args[-1], lineno) if kind.parametric else None
        try:
            gates.append(Gate(kind, qubits, theta))
        except CircuitError as exc:
            raise CircuitParseError(lineno, str(exc)) from None
        if kind is GateKind.MEASURE and qubits[0] in measured:
            raise CircuitParseError(lineno, f"qubit {qubits[0]} measured twice")
        if kind is not GateKind.MEASURE and measured.intersection(qubits):
            raise CircuitParseError(lineno, f"{name} after measurement of its qubit")
        if kind is GateKind.MEASURE:
            measured.add(qubits[0])
    if n_qubits is None:
        raise CircuitParseError(0, "empty document, missing 'qubits N' header")
    return Circuit(n_qubits, tuple(gates))
