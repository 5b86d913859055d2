from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "QEPZNE_THREADS"


def worker_count(requested: Optional[int] = None) -> int:
    """Worker cap: explicit value, else ``$QEPZNE_THREADS``; 0 or unset means one per CPU."""
    if requested is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ValueError("thread count must be >= 0")
    return requested or (os.cpu_count() or 1)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> list[R]:
    """``list(map(fn, items))``, possibly on worker threads; output order is the input order."""
    items = list(items)
    n = min(worker_count(threads), len(items))
    if n <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based generator for the sub-stream ``key`` of ``seed``.

    Each (seed, key) pair maps to its own Philox key, so draws never depend
    on which thread consumes which stream or in what order.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))
