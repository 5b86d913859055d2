"""Exact density-matrix backend for small circuits.

The state is kept as a tensor of shape ``(2,) * 2n``: the first n axes are
the row (ket) index and the last n the column (bra) index, each ordered
most-significant qubit first, so qubit q lives on axes ``n-1-q`` and
``2n-1-q``.
"""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from ..circuit import Circuit, gate_matrix
from ..circuit.unitary import apply_to_axes
from .noise import Dephase, Depolarize, GateOp, NoiseModel, Relax
from .results import ZExpectations

MAX_DM_QUBITS = 10

_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class SimulationError(RuntimeError):
    pass


def twirled_relaxation(gamma: float) -> tuple[float, float, float]:
    """(pX, pY, pZ) of the Pauli twirl of amplitude damping."""
    root = math.sqrt(max(0.0, 1.0 - gamma))
    return gamma / 4, gamma / 4, (2.0 - gamma - 2.0 * root) / 4


class DensityMatrix:
    def __init__(self, n_qubits: int):
        if n_qubits > MAX_DM_QUBITS:
            raise SimulationError(f"density-matrix backend supports at most {MAX_DM_QUBITS} qubits, got {n_qubits}")
        self.n = n_qubits
        rho = np.zeros((2,) * (2 * n_qubits), dtype=complex)
        rho[(0,) * (2 * n_qubits)] = 1.0
        self.rho = rho

    def _rows(self, qubits) -> list[int]:
        return [self.n - 1 - q for q in qubits]

    def _cols(self, qubits) -> list[int]:
        return [2 * self.n - 1 - q for q in qubits]

    def _conjugate(self, rho: np.ndarray, mat: np.ndarray, qubits) -> np.ndarray:
        rho = apply_to_axes(rho, mat, self._rows(qubits))
        return apply_to_axes(rho, mat.conj(), self._cols(qubits))

    def apply_unitary(self, mat: np.ndarray, qubits) -> None:
        self.rho = self._conjugate(self.rho, mat, qubits)

    def apply_kraus(self, kraus: list[np.ndarray], qubits) -> None:
        self.rho = sum(self._conjugate(self.rho, k, qubits) for k in kraus)

    def apply_pauli_channel(self, q: int, px: float, py: float, pz: float) -> None:
        out = (1.0 - px - py - pz) * self.rho
        for p, name in ((px, "X"), (py, "Y"), (pz, "Z")):
            if p:
                out = out + p * self._conjugate(self.rho, _PAULI[name], (q,))
        self.rho = out

    def _fully_mix(self, rho: np.ndarray, q: int) -> np.ndarray:
        r, c = self.n - 1 - q, 2 * self.n - 1 - q
        moved = np.moveaxis(rho, (r, c), (0, 1))
        half_trace = 0.5 * (moved[0, 0] + moved[1, 1])
        out = np.zeros_like(moved)
        out[0, 0] = half_trace
        out[1, 1] = half_trace
        return np.moveaxis(out, (0, 1), (r, c))

    def depolarize(self, qubits, p: float) -> None:
        mixed = self.rho
        for q in qubits:
            mixed = self._fully_mix(mixed, q)
        self.rho = (1.0 - p) * self.rho + p * mixed

    def amplitude_damp(self, q: int, gamma: float) -> None:
        k0 = np.array([[1, 0], [0, math.sqrt(1.0 - gamma)]], dtype=complex)
        k1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex)
        self.apply_kraus([k0, k1], (q,))

    def trace(self) -> complex:
        dim = 2**self.n
        return complex(np.trace(self.rho.reshape(dim, dim)))

    def probabilities(self) -> np.ndarray:
        dim = 2**self.n
        return np.real(np.diagonal(self.rho.reshape(dim, dim))).copy()

    def z_expectations(self) -> np.ndarray:
        probs = self.probabilities()
        idx = np.arange(probs.size)
        return np.array([probs @ (1 - 2 * ((idx >> q) & 1)) for q in range(self.n)])


def run_density_matrix(
    c: Circuit,
    nm: NoiseModel,
    *,
    twirl_relaxation: bool = False,
    observer: Optional[Callable[[DensityMatrix], None]] = None,
) -> ZExpectations:
    """Exact per-qubit <Z_i> including readout flips.

    ``twirl_relaxation`` replaces amplitude damping by its Pauli twirl, which
    is what the stabilizer backend samples. ``observer`` is called after every
    operation (for invariant checks).
    """
    if nm.n_qubits != c.n_qubits:
        raise SimulationError("noise model and circuit disagree on qubit count")
    dm = DensityMatrix(c.n_qubits)
    for op in nm.ops:
        if isinstance(op, GateOp):
            dm.apply_unitary(gate_matrix(op.gate), op.gate.qubits)
        elif isinstance(op, Depolarize):
            if op.p:
                dm.depolarize(op.qubits, op.p)
        elif isinstance(op, Relax):
            if op.gamma:
                if twirl_relaxation:
                    dm.apply_pauli_channel(op.qubit, *twirled_relaxation(op.gamma))
                else:
                    dm.amplitude_damp(op.qubit, op.gamma)
        elif isinstance(op, Dephase):
            if op.lam:
                dm.apply_pauli_channel(op.qubit, 0.0, 0.0, op.lam / 2)
        else:
            raise SimulationError(f"unknown operation {op!r}")
        if observer is not None:
            observer(dm)
    z = dm.z_expectations()
    values = tuple(
        float(zq * (1.0 - p01 - p10) + (p10 - p01)) for zq, (p01, p10) in zip(z, nm.readout)
    )
    return ZExpectations(values=values, stderr=(0.0,) * len(values), shots=0)
