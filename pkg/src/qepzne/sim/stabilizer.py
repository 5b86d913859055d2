"""Stochastic Pauli-noise backend for Clifford circuits.

One noiseless tableau run gives a reference measurement record. Noisy shots
are then Pauli frames (one bit pair per qubit per shot) pushed through the
same Clifford gates, with sampled Pauli errors XORed in; a shot's outcome is
the reference bit XOR the frame's X component. Frames start with a random Z
component, which leaves |0...0> alone but makes outcomes that are random in
the reference run come out random per shot.

Relaxation is sampled as its Pauli twirl, dephasing as a Z flip with
probability lam/2, depolarizing as a uniformly random non-identity Pauli
with probability p (d^2 - 1) / d^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .._parallel import ordered_map, stream
from ..circuit import Circuit, Gate, GateKind
from .density import SimulationError, twirled_relaxation
from .noise import Dephase, Depolarize, GateOp, NoiseModel, Relax
from .results import ZExpectations
from .tableau import Tableau

BATCH_SHOTS = 4096
CLIFFORD_ATOL = 1e-9


class NonCliffordError(SimulationError):
    pass


def quarter_turns(g: Gate, index: Optional[int] = None) -> int:
    """RZ angle as a multiple of pi/2 (mod 4); raises for non-Clifford angles."""
    k = g.theta / (math.pi / 2)
    nearest = round(k)
    if abs(k - nearest) > CLIFFORD_ATOL:
        where = f"instruction {index} " if index is not None else ""
        raise NonCliffordError(f"{where}({g}) is not Clifford")
    return nearest % 4


def check_clifford(c: Circuit) -> None:
    for k, g in enumerate(c.instructions):
        if g.kind is GateKind.RZ:
            quarter_turns(g, k)
        elif g.kind not in (GateKind.SX, GateKind.X, GateKind.CZ, GateKind.MEASURE):
            raise NonCliffordError(f"instruction {k} ({g}) is not a native Clifford gate")


@dataclass(frozen=True)
class _FrameOp:
    code: str  # "s", "sx", "cz", "dep", "pauli"
    qubits: tuple[int, ...]
    probs: tuple[float, ...] = ()


def _compose_pauli(a, b) -> tuple[float, float, float]:
    if a is None:
        return b
    ax, ay, az = a
    bx, by, bz = b
    ai, bi = 1 - ax - ay - az, 1 - bx - by - bz
    return (
        ai * bx + ax * bi + ay * bz + az * by,
        ai * by + ay * bi + ax * bz + az * bx,
        ai * bz + az * bi + ax * by + ay * bx,
    )


def _compile(nm: NoiseModel) -> tuple[list[Gate], list[_FrameOp]]:
    gates: list[Gate] = []
    frame: list[_FrameOp] = []
    pending: dict[int, tuple[float, float, float]] = {}

    def flush(qubits) -> None:
        for q in qubits:
            probs = pending.pop(q, None)
            if probs is not None and any(probs):
                frame.append(_FrameOp("pauli", (q,), probs))

    for op in nm.ops:
        if isinstance(op, GateOp):
            g = op.gate
            flush(g.qubits)
            gates.append(g)
            if g.kind is GateKind.RZ:
                if quarter_turns(g) % 2:
                    frame.append(_FrameOp("s", g.qubits))
            elif g.kind is GateKind.SX:
                frame.append(_FrameOp("sx", g.qubits))
            elif g.kind is GateKind.CZ:
                frame.append(_FrameOp("cz", g.qubits))
            elif g.kind is not GateKind.X:
                raise NonCliffordError(f"({g}) is not a native Clifford gate")
        elif isinstance(op, Depolarize):
            flush(op.qubits)
            if op.p:
                d2 = 4 ** len(op.qubits)
                frame.append(_FrameOp("dep", op.qubits, (op.p * (d2 - 1) / d2,)))
        elif isinstance(op, Relax):
            pending[op.qubit] = _compose_pauli(pending.get(op.qubit), twirled_relaxation(op.gamma))
        elif isinstance(op, Dephase):
            pending[op.qubit] = _compose_pauli(pending.get(op.qubit), (0.0, 0.0, op.lam / 2))
        else:
            raise SimulationError(f"unknown operation {op!r}")
    flush(sorted(pending))
    return gates, frame


def _evolve(gates, n: int) -> Tableau:
    t = Tableau(n)
    for g in gates:
        kind = g.kind
        if kind is GateKind.RZ:
            k = quarter_turns(g)
            for _ in range(k):
                t.s(g.qubits[0])
        elif kind is GateKind.SX:
            t.sx(g.qubits[0])
        elif kind is GateKind.X:
            t.pauli_x(g.qubits[0])
        elif kind is GateKind.CZ:
            t.cz(*g.qubits)
    return t


def _reference(gates: list[Gate], n: int, rng: np.random.Generator) -> np.ndarray:
    t = _evolve(gates, n)
    return np.array([t.measure(q, rng) for q in range(n)], dtype=bool)


def exact_z_clifford(c: Circuit) -> ZExpectations:
    """Noiseless per-qubit <Z_i> of a Clifford circuit, exactly, at any width."""
    check_clifford(c)
    t = _evolve(c.gates, c.n_qubits)
    values = tuple(t.z_expectation(q) for q in range(c.n_qubits))
    return ZExpectations(values, (0.0,) * c.n_qubits, 0)


def _run_batch(frame: list[_FrameOp], ref: np.ndarray, readout, shots: int, rng: np.random.Generator) -> np.ndarray:
    n = ref.size
    x = np.zeros((n, shots), dtype=bool)
    z = rng.random((n, shots)) < 0.5
    for op in frame:
        code = op.code
        if code == "s":
            q = op.qubits[0]
            z[q] ^= x[q]
        elif code == "sx":
            q = op.qubits[0]
            x[q] ^= z[q]
        elif code == "cz":
            a, b = op.qubits
            z[a] ^= x[b]
            z[b] ^= x[a]
        elif code == "dep":
            hit = np.flatnonzero(rng.random(shots) < op.probs[0])
            if hit.size:
                k = len(op.qubits)
                # uniform over the 4^k - 1 non-identity Paulis, two bits per qubit
                pauli = rng.integers(1, 4**k, size=hit.size)
                for j, q in enumerate(op.qubits):
                    x[q, hit] ^= ((pauli >> (2 * j)) & 1).astype(bool)
                    z[q, hit] ^= ((pauli >> (2 * j + 1)) & 1).astype(bool)
        else:  # pauli: (pX, pY, pZ)
            q = op.qubits[0]
            px, py, pz = op.probs
            u = rng.random(shots)
            x[q] ^= u < px + py
            z[q] ^= (u >= px) & (u < px + py + pz)
    bits = ref[:, None] ^ x
    p01 = np.array([r[0] for r in readout])[:, None]
    p10 = np.array([r[1] for r in readout])[:, None]
    if p01.any() or p10.any():
        bits ^= rng.random((n, shots)) < np.where(bits, p10, p01)
    return bits.sum(axis=1)


def run_stabilizer(
    c: Circuit, nm: NoiseModel, shots: int, seed: int, *, threads: Optional[int] = None
) -> ZExpectations:
    """Sampled per-qubit <Z_i> (readout flips included) with binomial standard errors."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if nm.n_qubits != c.n_qubits:
        raise SimulationError("noise model and circuit disagree on qubit count")
    check_clifford(c)
    gates, frame = _compile(nm)
    ref = _reference(gates, c.n_qubits, stream(seed, 0))
    batches = [(b, min(BATCH_SHOTS, shots - b * BATCH_SHOTS)) for b in range(math.ceil(shots / BATCH_SHOTS))]
    counts = ordered_map(
        lambda bs: _run_batch(frame, ref, nm.readout, bs[1], stream(seed, 1, bs[0])), batches, threads
    )
    ones = np.sum(counts, axis=0)
    f = ones / shots
    values = 1.0 - 2.0 * f
    stderr = 2.0 * np.sqrt(f * (1.0 - f) / shots)
    return ZExpectations(values=tuple(values.tolist()), stderr=tuple(stderr.tolist()), shots=shots)
