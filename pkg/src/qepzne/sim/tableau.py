"""Aaronson-Gottesman stabilizer tableau.

Rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers. A row is a Pauli
string in (x, z) bit form, (1, 1) meaning Y, with a sign bit ``r``.
"""

from __future__ import annotations

import numpy as np


class Tableau:
    def __init__(self, n: int):
        self.n = n
        self.x = np.zeros((2 * n + 1, n), dtype=bool)  # last row is scratch space
        self.z = np.zeros((2 * n + 1, n), dtype=bool)
        self.r = np.zeros(2 * n + 1, dtype=bool)
        idx = np.arange(n)
        self.x[idx, idx] = True
        self.z[idx + n, idx] = True

    def h(self, q: int) -> None:
        x, z = self.x[:, q].copy(), self.z[:, q].copy()
        self.r ^= x & z
        self.x[:, q], self.z[:, q] = z, x

    def s(self, q: int) -> None:
        self.r ^= self.x[:, q] & self.z[:, q]
        self.z[:, q] ^= self.x[:, q]

    def sdg(self, q: int) -> None:
        self.s(q)
        self.s(q)
        self.s(q)

    def pauli_x(self, q: int) -> None:
        self.r ^= self.z[:, q]

    def pauli_z(self, q: int) -> None:
        self.r ^= self.x[:, q]

    def sx(self, q: int) -> None:
        self.h(q)
        self.s(q)
        self.h(q)

    def cnot(self, a: int, b: int) -> None:
        xa, zb = self.x[:, a], self.z[:, b]
        self.r ^= xa & zb & ~(self.x[:, b] ^ self.z[:, a])
        self.x[:, b] ^= xa
        self.z[:, a] ^= zb

    def cz(self, a: int, b: int) -> None:
        self.h(b)
        self.cnot(a, b)
        self.h(b)

    def _rowsum(self, h: int, i: int) -> None:
        x1, z1 = self.x[i].astype(np.int8), self.z[i].astype(np.int8)
        x2, z2 = self.x[h].astype(np.int8), self.z[h].astype(np.int8)
        g = np.where(
            (x1 == 1) & (z1 == 1),
            z2 - x2,
            np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
        )
        total = 2 * int(self.r[h]) + 2 * int(self.r[i]) + int(g.sum())
        self.r[h] = (total % 4) == 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def measure(self, q: int, rng: np.random.Generator) -> int:
        """Z-basis measurement; collapses the state. Random outcomes come from ``rng``."""
        n = self.n
        hits = np.flatnonzero(self.x[n : 2 * n, q])
        if hits.size:
            p = int(hits[0]) + n
            for i in np.flatnonzero(self.x[: 2 * n, q]):
                if i != p:
                    self._rowsum(int(i), p)
            self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
            self.x[p] = False
            self.z[p] = False
            self.z[p, q] = True
            outcome = int(rng.integers(2))
            self.r[p] = bool(outcome)
            return outcome
        return self._deterministic_outcome(q)

    def _deterministic_outcome(self, q: int) -> int:
        n = self.n
        scratch = 2 * n
        self.x[scratch] = False
        self.z[scratch] = False
        self.r[scratch] = False
        for i in np.flatnonzero(self.x[:n, q]):
            self._rowsum(scratch, int(i) + n)
        return int(self.r[scratch])

    def z_expectation(self, q: int) -> float:
        """Exact <Z_q> without collapsing: 0 if the outcome is random, else +-1."""
        if self.x[self.n : 2 * self.n, q].any():
            return 0.0
        return 1.0 - 2.0 * self._deterministic_outcome(q)
