"""Circuit intermediate representation.

Circuits are immutable: an ordered tuple of :class:`Gate` instructions over
``n_qubits`` qubits. Qubit 0 is the least-significant bit everywhere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional


class GateKind(str, enum.Enum):
    RZ = "rz"
    SX = "sx"
    X = "x"
    CZ = "cz"
    RZZ = "rzz"
    RX = "rx"
    MEASURE = "measure"

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CZ, GateKind.RZZ) else 1

    @property
    def parametric(self) -> bool:
        return self in (GateKind.RZ, GateKind.RZZ, GateKind.RX)

    @property
    def logical(self) -> bool:
        return self in (GateKind.RZZ, GateKind.RX)


NATIVE_KINDS = frozenset({GateKind.RZ, GateKind.SX, GateKind.X, GateKind.CZ, GateKind.MEASURE})


class CircuitError(ValueError):
    """Raised when a circuit or instruction violates the IR invariants."""


@dataclass(frozen=True)
class Gate:
    """One instruction: a gate kind, the qubits it acts on and an optional angle."""

    kind: GateKind
    qubits: tuple[int, ...]
    theta: Optional[float] = None

    def __post_init__(self) -> None:
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != kind.arity:
            raise CircuitError(f"{kind.value} takes {kind.arity} qubit(s), got {len(self.qubits)}")
        if kind.arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"{kind.value} on duplicate qubit {self.qubits[0]}")
        if any(q < 0 for q in self.qubits):
            raise CircuitError(f"negative qubit index in {kind.value}")
        if kind.parametric:
            if self.theta is None or not math.isfinite(self.theta):
                raise CircuitError(f"{kind.value} needs a finite angle")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise CircuitError(f"{kind.value} takes no angle")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind.arity == 2

    @property
    def edge(self) -> tuple[int, int]:
        """Unordered coupling edge of a two-qubit gate as ``(min, max)``."""
        a, b = self.qubits
        return (a, b) if a < b else (b, a)

    def __str__(self) -> str:
        parts = [self.kind.value, *map(str, self.qubits)]
        if self.theta is not None:
            parts.append(repr(self.theta))
        return " ".join(parts)


def rz(q: int, theta: float) -> Gate:
    return Gate(GateKind.RZ, (q,), theta)


def sx(q: int) -> Gate:
    return Gate(GateKind.SX, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def cz(a: int, b: int) -> Gate:
    return Gate(GateKind.CZ, (a, b))


def rzz(a: int, b: int, theta: float) -> Gate:
    return Gate(GateKind.RZZ, (a, b), theta)


def rx(q: int, theta: float) -> Gate:
    return Gate(GateKind.RX, (q,), theta)


def measure(q: int) -> Gate:
    return Gate(GateKind.MEASURE, (q,))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate program. Instruction order is the execution order."""

    n_qubits: int
    instructions: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise CircuitError("a circuit needs at least one qubit")
        instructions = tuple(self.instructions)
        object.__setattr__(self, "instructions", instructions)
        measured: set[int] = set()
        for pos, gate in enumerate(instructions):
            if not isinstance(gate, Gate):
                raise CircuitError(f"instruction {pos} is not a Gate")
            for q in gate.qubits:
                if q >= self.n_qubits:
                    raise CircuitError(
                        f"instruction {pos} ({gate}) references qubit {q} >= {self.n_qubits}"
                    )
                if q in measured:
                    raise CircuitError(f"instruction {pos} ({gate}) acts on qubit {q} after its measurement")
            if gate.kind is GateKind.MEASURE:
                measured.add(gate.qubits[0])

    @classmethod
    def from_gates(cls, n_qubits: int, gates: Iterable[Gate]) -> "Circuit":
        return cls(n_qubits, tuple(gates))

    @property
    def native(self) -> bool:
        return all(g.kind in NATIVE_KINDS for g in self.instructions)

    @property
    def measured_qubits(self) -> tuple[int, ...]:
        return tuple(g.qubits[0] for g in self.instructions if g.kind is GateKind.MEASURE)

    @property
    def gates(self) -> tuple[Gate, ...]:
        """Instructions without the measurements."""
        return tuple(g for g in self.instructions if g.kind is not GateKind.MEASURE)

    def used_edges(self) -> list[tuple[int, int]]:
        """Distinct coupling edges touched by two-qubit gates, sorted by (min, max)."""
        return sorted({g.edge for g in self.instructions if g.is_two_qubit})

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.instructions if g.kind is kind)

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)


def prune_identity(c: Circuit, atol: float = 1e-12) -> Circuit:
    """Drop zero-angle RZ/RX/RZZ rotations.

    Off by default everywhere: zero-angle gates still cost time and error on
    hardware, so the error accounting keeps them unless asked otherwise.
    """
    kept = [g for g in c.instructions if not (g.kind.parametric and abs(g.theta) <= atol)]
    return Circuit(c.n_qubits, tuple(kept))
