"""Lowering of logical rotations to the RZ/SX/X/CZ basis."""

from __future__ import annotations

import math

from .ir import Circuit, Gate, GateKind, cz, rz, sx

HALF_PI = math.pi / 2


def _hadamard(q: int) -> list[Gate]:
    return [rz(q, HALF_PI), sx(q), rz(q, HALF_PI)]


def rx_template(q: int, theta: float) -> list[Gate]:
    """RX(theta) = H RZ(theta) H, with H = RZ(pi/2) SX RZ(pi/2) and the inner RZs merged."""
    return [rz(q, HALF_PI), sx(q), rz(q, theta + math.pi), sx(q), rz(q, HALF_PI)]


def rzz_template(a: int, b: int, theta: float) -> list[Gate]:
    """RZZ(theta) = H_b CZ RX_b(theta) CZ H_b.

    The two CZs turn the middle X rotation on ``b`` into a ZZ rotation.
    """
    return [*_hadamard(b), cz(a, b), *rx_template(b, theta), cz(a, b), *_hadamard(b)]


def decompose_to_native(c: Circuit) -> Circuit:
    if c.native:
        return c
    out: list[Gate] = []
    for g in c.instructions:
        if g.kind is GateKind.RZZ:
            out.extend(rzz_template(*g.qubits, g.theta))
        elif g.kind is GateKind.RX:
            out.extend(rx_template(g.qubits[0], g.theta))
        else:
            out.append(g)
    return Circuit(c.n_qubits, tuple(out))
