"""Integer grid scan for the brute-force fixed-point oracle.

The scan asks whether some ``k`` in ``{0..K-1}^n`` satisfies
``A @ k + c == 0 (mod m)`` row-wise.  Two interchangeable backends exist:
a numba ``@njit`` loop with early exit, and a chunked numpy version.  Set
``HYPERTORUS_NO_NUMBA=1`` to force numpy (numba is also skipped when it
cannot be imported).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("HYPERTORUS_NO_NUMBA", "").lower() in ("1", "true", "yes")
HAVE_NUMBA = numba is not None and not _DISABLED
DEFAULT_BACKEND = "numba" if HAVE_NUMBA else "numpy"

_CHUNK = 1 << 16


def scan_numpy(A: np.ndarray, c: np.ndarray, modulus: int, K: int) -> int:
    """Index of the first grid solution (little-endian digits), or -1."""
    n = A.shape[1]
    total = K**n
    place = K ** np.arange(n, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        k = (idx[:, None] // place) % K
        res = (k @ A.T + c) % modulus
        hit = np.flatnonzero(~res.any(axis=1))
        if hit.size:
            return int(start + hit[0])
    return -1


def _scan_loop(A, c, modulus, K):
    m, n = A.shape
    k = np.zeros(n, dtype=np.int64)
    total = K**n
    for idx in range(total):
        ok = True
        for i in range(m):
            s = c[i]
            for j in range(n):
                s += A[i, j] * k[j]
            if s % modulus != 0:
                ok = False
                break
        if ok:
            return idx
        j = 0
        while j < n:
            k[j] += 1
            if k[j] < K:
                break
            k[j] = 0
            j += 1
    return -1


if numba is not None:
    _scan_jit = numba.njit(cache=True, nogil=True)(_scan_loop)
else:  # pragma: no cover
    _scan_jit = None


def scan_numba(A: np.ndarray, c: np.ndarray, modulus: int, K: int) -> int:
    if _scan_jit is None:  # pragma: no cover
        raise RuntimeError("numba is not available")
    return int(_scan_jit(A, c, np.int64(modulus), np.int64(K)))


def grid_scan(A, c, modulus: int, K: int, backend: str | None = None) -> int:
    A = np.ascontiguousarray(A, dtype=np.int64)
    c = np.ascontiguousarray(c, dtype=np.int64)
    backend = backend or DEFAULT_BACKEND
    if backend == "numba":
        return scan_numba(A, c, modulus, K)
    if backend == "numpy":
        return scan_numpy(A, c, modulus, K)
    raise ValueError(f"unknown backend {backend!r}")


def decode_index(idx: int, n: int, K: int) -> list[int]:
    return [(idx // K**j) % K for j in range(n)]
