"""Dense matrices for gates and whole circuits (small-n test oracle)."""

from __future__ import annotations

import numpy as np

from .ir import Circuit, CircuitError, Gate, GateKind

MAX_UNITARY_QUBITS = 10

_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
# Two-qubit matrices act on the pair (q0, q1) with q0 as the least-significant bit.
_CZ = np.diag([1, 1, 1, -1]).astype(complex)


def gate_matrix(g: Gate) -> np.ndarray:
    kind = g.kind
    if kind is GateKind.RZ:
        t = g.theta / 2
        return np.diag([np.exp(-1j * t), np.exp(1j * t)])
    if kind is GateKind.SX:
        return _SX.copy()
    if kind is GateKind.X:
        return _X.copy()
    if kind is GateKind.RX:
        c, s = np.cos(g.theta / 2), np.sin(g.theta / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.CZ:
        return _CZ.copy()
    if kind is GateKind.RZZ:
        t = g.theta / 2
        # ZZ eigenvalue is +1 when both bits agree
        return np.diag(np.exp(-1j * t * np.array([1, -1, -1, 1])))
    raise CircuitError(f"{kind.value} has no unitary")


def apply_to_axes(tensor: np.ndarray, mat: np.ndarray, axes: list[int]) -> np.ndarray:
    """Contract ``mat`` into ``tensor`` over ``axes`` (listed least-significant qubit first)."""
    k = len(axes)
    op = mat.reshape((2,) * (2 * k))
    # reshape of a 2^k matrix orders its indices most-significant first
    in_axes = list(range(2 * k - 1, k - 1, -1))
    out = np.tensordot(op, tensor, axes=(in_axes, axes))
    # tensordot puts the k output indices in front, most-significant first
    return np.moveaxis(out, list(range(k)), axes[::-1])


def unitary_of(c: Circuit) -> np.ndarray:
    n = c.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise CircuitError(f"unitary_of supports at most {MAX_UNITARY_QUBITS} qubits, got {n}")
    dim = 2**n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.instructions:
        if g.kind is GateKind.MEASURE:
            continue
        axes = [n - 1 - q for q in g.qubits]
        u = apply_to_axes(u, gate_matrix(g), axes)
    return u.reshape(dim, dim)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-9) -> bool:
    """True when ``a = e^{i phi} b`` elementwise within ``atol``."""
    if a.shape != b.shape:
        return False
    k = np.argmax(np.abs(b))
    if abs(b.flat[k]) < atol:
        return bool(np.allclose(a, b, atol=atol))
    phase = a.flat[k] / b.flat[k]
    if abs(abs(phase) - 1) > atol:
        return False
    return bool(np.max(np.abs(a - phase * b)) <= atol)
