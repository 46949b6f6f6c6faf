"""Hot loop kernels: periodic ball sums/maxima and the direct circular sum.

Every kernel exists twice, as a numba ``@njit`` loop and as a pure-numpy
(scipy) fallback.  The numba path is used unless ``FOFANA_LAB_BACKEND=numpy``
is set or numba cannot be imported.  Both paths take 2-D arrays; 1-D data
is passed with shape ``(1, n)``.

Balls are in cell units: grid offset ``(a, b)`` belongs to the ball of
squared radius ``R2`` when ``a*a + b*b < R2``, with offsets taken as their
minimal torus representatives so each torus point is counted once.
"""

from __future__ import annotations

import math
import os

import numpy as np
from scipy.ndimage import maximum_filter1d

__all__ = [
    "BACKEND",
    "ball_rows",
    "ball_count",
    "ball_sum",
    "ball_max",
    "circular_direct",
    "numpy_impl",
    "numba_impl",
]


def _want_numba() -> bool:
    choice = os.environ.get("FOFANA_LAB_BACKEND", "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise RuntimeError(f"FOFANA_LAB_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    return choice == "numba"


def ball_rows(n1: int, n2: int, R2: float) -> list[tuple[int, int]]:
    """Row offsets ``a`` of the ball with the half-width ``b`` of each row.

    ``b = -1`` marks a row that wraps the whole torus circle.
    """
    rows = []
    for a in range(-((n1 - 1) // 2), n1 // 2 + 1):
        rem = R2 - a * a
        if rem <= 0:
            continue
        b = int(math.floor(math.sqrt(rem)))
        while (b + 1) * (b + 1) < rem:
            b += 1
        while b >= 0 and b * b >= rem:
            b -= 1
        if b < 0:
            continue
        if 2 * b + 1 >= n2:
            b = -1
        rows.append((a, b))
    return rows


def ball_count(n1: int, n2: int, R2: float) -> int:
    return sum(n2 if b < 0 else 2 * b + 1 for _, b in ball_rows(n1, n2, R2))


# ---------------------------------------------------------------- numpy path


class numpy_impl:
    """Pure numpy/scipy kernels."""

    @staticmethod
    def ball_sum(v: np.ndarray, R2: float) -> np.ndarray:
        n1, n2 = v.shape
        out = np.zeros_like(v)
        ext = np.concatenate([v, v, v], axis=1)
        C = np.zeros((n1, 3 * n2 + 1), dtype=v.dtype)
        np.cumsum(ext, axis=1, out=C[:, 1:])
        cache: dict[int, np.ndarray] = {}
        for a, b in ball_rows(n1, n2, R2):
            S = cache.get(b)
            if S is None:
                if b < 0:
                    S = np.repeat(v.sum(axis=1, keepdims=True), n2, axis=1)
                else:
                    S = C[:, n2 + b + 1 : 2 * n2 + b + 1] - C[:, n2 - b : 2 * n2 - b]
                cache[b] = S
            out += np.roll(S, -a, axis=0)
        return out

    @staticmethod
    def ball_max(v: np.ndarray, R2: float) -> np.ndarray:
        n1, n2 = v.shape
        out = np.full_like(v, -np.inf)
        cache: dict[int, np.ndarray] = {}
        for a, b in ball_rows(n1, n2, R2):
            S = cache.get(b)
            if S is None:
                if b < 0:
                    S = np.repeat(v.max(axis=1, keepdims=True), n2, axis=1)
                else:
                    S = maximum_filter1d(v, size=2 * b + 1, axis=1, mode="wrap")
                cache[b] = S
            np.maximum(out, np.roll(S, -a, axis=0), out=out)
        return out

    @staticmethod
    def circular_direct(u: np.ndarray, K: np.ndarray, block: int = 512) -> np.ndarray:
        """``out[i] = sum_j K[(i - j) mod n] u[j]`` in 2-D, O(N^2)."""
        n1, n2 = u.shape
        dtype = np.result_type(u, K)
        out = np.zeros((n1, n2), dtype=dtype)
        j2 = np.arange(n2)
        for a1 in range(n1):
            shifted = np.roll(u, a1, axis=0)
            krow = K[a1]
            for start in range(0, n2, block):
                i2 = np.arange(start, min(start + block, n2))
                circ = krow[(i2[:, None] - j2[None, :]) % n2]
                out[:, start : start + len(i2)] += shifted @ circ.T
        return out


# ---------------------------------------------------------------- numba path

numba_impl = None
if _want_numba():
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - exercised only without numba
        njit = None

    if njit is not None:

        @njit(cache=True)
        def _ball_sum_nb(v, rows_a, rows_b):
            n1, n2 = v.shape
            C = np.zeros((n1, 3 * n2 + 1))
            tot = np.zeros(n1)
            for i1 in range(n1):
                acc = 0.0
                for e in range(3 * n2):
                    acc += v[i1, e % n2]
                    C[i1, e + 1] = acc
                s = 0.0
                for i2 in range(n2):
                    s += v[i1, i2]
                tot[i1] = s
            out = np.zeros((n1, n2))
            for r in range(rows_a.shape[0]):
                a = rows_a[r]
                b = rows_b[r]
                for i1 in range(n1):
                    src = (i1 + a) % n1
                    if b < 0:
                        for i2 in range(n2):
                            out[i1, i2] += tot[src]
                    else:
                        for i2 in range(n2):
                            out[i1, i2] += C[src, n2 + i2 + b + 1] - C[src, n2 + i2 - b]
            return out

        @njit(cache=True)
        def _row_window_max(v, b, S):
            """``S[i, c] = max_{|e| <= b} v[i, (c + e) mod n2]``.

            van Herk / Gil-Werman: block-wise prefix and suffix maxima over
            the periodically extended row, three comparisons per entry.
            """
            n1, n2 = v.shape
            w = 2 * b + 1
            n = n2 + 2 * b
            g = np.empty(n)
            h = np.empty(n)
            for i1 in range(n1):
                for e in range(n):
                    x = v[i1, (e - b) % n2]
                    g[e] = x if e % w == 0 else max(g[e - 1], x)
                for e in range(n - 1, -1, -1):
                    x = v[i1, (e - b) % n2]
                    h[e] = x if (e % w == w - 1 or e == n - 1) else max(h[e + 1], x)
                for c in range(n2):
                    S[i1, c] = max(h[c], g[c + w - 1])

        @njit(cache=True)
        def _ball_max_nb(v, rows_a, rows_b):
            # rows arrive sorted by half-width b, so each window is filtered once
            n1, n2 = v.shape
            out = np.full((n1, n2), -np.inf)
            S = np.empty((n1, n2))
            current = -2
            for r in range(rows_a.shape[0]):
                a = rows_a[r]
                b = rows_b[r]
                if b != current:
                    if b < 0:
                        for i1 in range(n1):
                            m = -np.inf
                            for i2 in range(n2):
                                if v[i1, i2] > m:
                                    m = v[i1, i2]
                            for i2 in range(n2):
                                S[i1, i2] = m
                    else:
                        _row_window_max(v, b, S)
                    current = b
                for i1 in range(n1):
                    src_row = S[(i1 + a) % n1]
                    out_row = out[i1]
                    for i2 in range(n2):
                        out_row[i2] = max(out_row[i2], src_row[i2])
            return out

        @njit(cache=True)
        def _circular_direct_nb(u, K):
            n1, n2 = u.shape
            out = np.zeros((n1, n2))
            for i1 in range(n1):
                for j1 in range(n1):
                    krow = K[(i1 - j1) % n1]
                    for i2 in range(n2):
                        acc = 0.0
                        # j2 <= i2: offset i2 - j2 in [0, i2]
                        for j2 in range(i2 + 1):
                            acc += krow[i2 - j2] * u[j1, j2]
                        for j2 in range(i2 + 1, n2):
                            acc += krow[n2 + i2 - j2] * u[j1, j2]
                        out[i1, i2] += acc
            return out

        def _rows_arrays(n1, n2, R2):
            rows = ball_rows(n1, n2, R2)
            ra = np.array([a for a, _ in rows], dtype=np.int64)
            rb = np.array([b for _, b in rows], dtype=np.int64)
            return ra, rb

        class numba_impl:  # noqa: N801 - mirrors numpy_impl
            """numba ``@njit`` kernels (real float64 data)."""

            @staticmethod
            def ball_sum(v: np.ndarray, R2: float) -> np.ndarray:
                ra, rb = _rows_arrays(*v.shape, R2)
                return _ball_sum_nb(np.ascontiguousarray(v, dtype=np.float64), ra, rb)

            @staticmethod
            def ball_max(v: np.ndarray, R2: float) -> np.ndarray:
                ra, rb = _rows_arrays(*v.shape, R2)
                order = np.argsort(rb, kind="stable")
                ra, rb = ra[order], rb[order]
                return _ball_max_nb(np.ascontiguousarray(v, dtype=np.float64), ra, rb)

            @staticmethod
            def circular_direct(u: np.ndarray, K: np.ndarray) -> np.ndarray:
                if np.iscomplexobj(u) or np.iscomplexobj(K):
                    return numpy_impl.circular_direct(u, K)
                return _circular_direct_nb(
                    np.ascontiguousarray(u, dtype=np.float64), np.ascontiguousarray(K, dtype=np.float64)
                )


_impl = numba_impl if numba_impl is not None else numpy_impl
BACKEND = "numba" if _impl is numba_impl else "numpy"

ball_sum = _impl.ball_sum
ball_max = _impl.ball_max
circular_direct = _impl.circular_direct
