"""First-order Trotter circuits for the transverse-field Ising model.

H = -J sum_<ij> Z_i Z_j + h sum_i X_i. One Trotter step is the ZZ layer
(RZZ(-2 J dt) on every edge, in topology order) followed by the X layer
(RX(2 h dt) on every qubit).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ir import Circuit, CircuitError, measure, rx, rzz


def chain_edges(n: int) -> list[tuple[int, int]]:
    """Nearest-neighbour chain 0-1-...-(n-1), in brickwork order.

    Even bonds (0,1), (2,3), ... come first and odd bonds (1,2), (3,4), ...
    second, so each half of the ZZ layer is one parallel layer of gates.
    """
    even = [(i, i + 1) for i in range(0, n - 1, 2)]
    odd = [(i, i + 1) for i in range(1, n - 1, 2)]
    return even + odd


@dataclass(frozen=True)
class TrotterParams:
    n_qubits: int
    steps: int
    dt: float
    J: float
    h: float
    topology: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise CircuitError("n_qubits must be >= 1")
        if self.steps < 1:
            raise CircuitError(f"steps must be >= 1, got {self.steps}")
        if not self.dt > 0:
            raise CircuitError(f"dt must be > 0, got {self.dt}")
        topology = tuple((int(a), int(b)) for a, b in self.topology)
        object.__setattr__(self, "topology", topology)
        seen = set()
        for a, b in topology:
            if not a < b:
                raise CircuitError(f"topology edge ({a},{b}) must satisfy i < j")
            if b >= self.n_qubits:
                raise CircuitError(f"topology edge ({a},{b}) references qubit >= {self.n_qubits}")
            if (a, b) in seen:
                raise CircuitError(f"duplicate topology edge ({a},{b})")
            seen.add((a, b))

    @classmethod
    def chain(cls, n_qubits: int, steps: int, dt: float, J: float, h: float) -> "TrotterParams":
        return cls(n_qubits, steps, dt, J, h, tuple(chain_edges(n_qubits)))


def build_trotter_ising(params: TrotterParams) -> Circuit:
    zz_angle = -2.0 * params.J * params.dt
    x_angle = 2.0 * params.h * params.dt
    gates = []
    for _ in range(params.steps):
        gates.extend(rzz(a, b, zz_angle) for a, b in params.topology)
        gates.extend(rx(q, x_angle) for q in range(params.n_qubits))
    gates.extend(measure(q) for q in range(params.n_qubits))
    return Circuit(params.n_qubits, tuple(gates))
