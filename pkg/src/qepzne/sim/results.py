from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class ObservableEstimate:
    value: float
    stderr: float = 0.0
    shots: int = 0  # 0 for exact backends


@dataclass(frozen=True)
class ZExpectations:
    """Per-qubit <Z_i> with standard errors (all zero for exact backends)."""

    values: tuple[float, ...]
    stderr: tuple[float, ...]
    shots: int = 0

    def __len__(self) -> int:
        return len(self.values)

    def to_csv(self, backend: str, seed=None) -> str:
        lines = [f"# backend={backend} shots={self.shots} seed={seed if seed is not None else ''}"]
        lines.append("qubit,z_expectation,stderr")
        lines.extend(f"{q},{v!r},{e!r}" for q, (v, e) in enumerate(zip(self.values, self.stderr)))
        return "\n".join(lines) + "\n"


def magnetization(z: ZExpectations | Sequence[float]) -> ObservableEstimate:
    """Total magnetization M = sum_i <Z_i>; errors add in quadrature."""
    if isinstance(z, ZExpectations):
        values, errs, shots = z.values, z.stderr, z.shots
    else:
        values, errs, shots = tuple(z), (0.0,) * len(z), 0
    return ObservableEstimate(
        value=math.fsum(values),
        stderr=math.sqrt(math.fsum(e * e for e in errs)),
        shots=shots,
    )
