"""Boolean-matrix kernels backing the explicit-state engines.

Relations over the 2^k valuations are dense boolean matrices; composition
and reflexive-transitive closure are the hot loops of the oracle engine.
Both come in a numba-compiled and a pure-numpy flavor. The numba path is
used when available; set DLPA_NO_NUMBA=1 to force the numpy fallback
(see benchmarks/bench_kernels.py for a comparison of the two).
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("DLPA_NO_NUMBA", "") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _compose_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # uint8 matmul then threshold: bool matmul is not supported directly
    return (a.astype(np.uint8) @ b.astype(np.uint8)) > 0


if HAS_NUMBA:

    @njit(cache=True)
    def _compose_u8(a, b):  # pragma: no cover - exercised via compose()
        n, m = a.shape[0], b.shape[1]
        inner = a.shape[1]
        out = np.zeros((n, m), dtype=np.uint8)
        for i in range(n):
            for t in range(inner):
                if a[i, t]:
                    for j in range(m):
                        if b[t, j]:
                            out[i, j] = 1
        return out

    def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return _compose_u8(a.astype(np.uint8), b.astype(np.uint8)).astype(bool)

else:

    compose = _compose_numpy


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=bool)


def star_closure(m: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by iterated squaring of (m | I)."""
    r = m | identity(m.shape[0])
    while True:
        r2 = compose(r, r)
        if np.array_equal(r2, r):
            return r
        r = r2


def matrix_power(m: np.ndarray, d: int) -> np.ndarray:
    """d-fold relational composition; identity for d = 0."""
    result = identity(m.shape[0])
    base = m
    while d:
        if d & 1:
            result = compose(result, base)
        d >>= 1
        if d:
            base = compose(base, base)
    return result
