"""Harmonic and temperature Cauchy-Riemann systems and their residual checks.

A system ``F = (u_1, ..., u_d, u_{d+1})`` is stored slice by slice.  The
harmonic system of ``f`` is ``u_j = R_j f * P_t``, ``u_{d+1} = f * P_t``; the
caloric map uses the heat kernel ``W_t`` instead.

The half-order time derivative

    (d_t^{1/2} g)(t) = (i / sqrt(pi)) int_t^inf g'(s) / sqrt(s - t) ds

is evaluated by quadrature after the substitution ``s = t + v^2``, which
turns the integrand into the smooth ``2 g'(t + v^2)``.  On slabs, ``g`` is
the monotone cubic (PCHIP) interpolant of the slices in ``log t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import PchipInterpolator

from .grid import GridFunction, GridSpec, Ladder, is_power_of_two, partial_derivative
from .norms import DEFAULT_R_LADDER, Exponents, NormReport, dilated_amalgam_norm
from .transforms import (
    Slab,
    frequencies,
    heat_extend,
    heat_equation_residual,
    poisson_extend,
    relative_residual,
    riesz_symbol,
    riesz_transform,
    t_derivatives,
)

__all__ = [
    "CRSystem",
    "ResidualReport",
    "QuadratureTailError",
    "harmonic_system",
    "harmonic_cr_residual",
    "half_time_derivative",
    "slab_half_derivative",
    "caloric_map",
    "temperature_cr_residual",
    "temperature_symbol_residual",
    "heat_residual",
    "caloric_norm",
    "dilate_system",
]

KINDS = ("harmonic", "temperature")


class QuadratureTailError(ValueError):
    """``g'`` has not decayed where the half-derivative integral is truncated."""


@dataclass(frozen=True, eq=False)
class CRSystem:
    """A ``(d+1)``-component field sampled at increasing heights.

    ``values`` has shape ``(T, d+1) + spec.shape``; component ``d`` is
    ``u_{d+1}``.
    """

    spec: GridSpec
    times: np.ndarray
    values: np.ndarray = field(repr=False)
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        times = np.asarray(self.times, dtype=float).reshape(-1)
        vals = np.asarray(self.values)
        d = self.spec.d
        if vals.shape != (len(times), d + 1) + self.spec.shape:
            raise ValueError(f"expected values of shape {(len(times), d + 1) + self.spec.shape}, got {vals.shape}")
        if len(times) < 3 or not np.all(np.diff(times) > 0) or not times[0] > 0:
            raise ValueError("need at least 3 positive, strictly increasing heights")
        times, vals = times.copy(), vals.copy()
        times.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_slabs(cls, slabs: list[Slab], kind: str) -> "CRSystem":
        spec, times = slabs[0].spec, slabs[0].times
        for s in slabs:
            if s.spec != spec or not np.array_equal(s.times, times):
                raise ValueError("component slabs must share grid and heights")
        return cls(spec, times, np.stack([s.values for s in slabs], axis=1), kind)

    @property
    def d(self) -> int:
        return self.spec.d

    def component(self, j: int) -> Slab:
        return Slab(self.spec, self.times, self.values[:, j])

    def with_component(self, j: int, slab_values: np.ndarray) -> "CRSystem":
        vals = self.values.copy()
        vals[:, j] = slab_values
        return CRSystem(self.spec, self.times, vals, self.kind)

    def magnitude(self) -> np.ndarray:
        """Euclidean length of the field vector, shape ``(T,) + spec.shape``."""
        return np.sqrt(np.sum(np.abs(self.values) ** 2, axis=1))

    def __add__(self, other: "CRSystem") -> "CRSystem":
        if other.spec != self.spec or other.kind != self.kind or not np.array_equal(other.times, self.times):
            raise ValueError("systems are not compatible")
        return CRSystem(self.spec, self.times, self.values + other.values, self.kind)

    def __mul__(self, c: float) -> "CRSystem":
        return CRSystem(self.spec, self.times, c * self.values, self.kind)

    __rmul__ = __mul__


@dataclass
class ResidualReport:
    """Relative ``L^2`` residual of each condition, over the slices in ``times``."""

    residuals: dict[str, float]
    times: np.ndarray
    tolerance: float | None = None

    @property
    def max(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    def passed(self, tol: float | None = None) -> bool:
        tol = self.tolerance if tol is None else tol
        if tol is None:
            raise ValueError("no tolerance given")
        return self.max <= tol

    def __getitem__(self, key: str) -> float:
        return self.residuals[key]


# ---------------------------------------------------------------- harmonic


def harmonic_system(f: GridFunction, t_ladder: Ladder) -> CRSystem:
    """``(R_1 f * P_t, ..., R_d f * P_t, f * P_t)``."""
    if not f.is_real:
        raise ValueError("harmonic_system expects real data")
    slabs = [poisson_extend(riesz_transform(f, j), t_ladder) for j in range(f.spec.d)]
    slabs.append(poisson_extend(f, t_ladder))
    return CRSystem.from_slabs(slabs, "harmonic")


def _interior_gradient(F: CRSystem) -> np.ndarray:
    """``G[j, k] = d u_j / d x_k`` on interior slices, ``x_{d+1} = t``.

    Shape ``(d+1, d+1, T-2) + spec.shape``.
    """
    d = F.d
    rows = []
    for j in range(d + 1):
        comp = F.component(j)
        cols = []
        for k in range(d):
            cols.append(np.stack([partial_derivative(comp[i], k).values for i in range(1, len(comp) - 1)]))
        cols.append(t_derivatives(comp)[1])
        rows.append(np.stack(cols))
    return np.stack(rows)


def harmonic_cr_residual(F: CRSystem) -> ResidualReport:
    """Residuals of ``d u_j/d x_k = d u_k/d x_j`` and ``sum_j d u_j/d x_j = 0``.

    Each residual is relative to the ``L^2`` norm of the full gradient
    ``|grad F|``; variables are indexed from 1 with ``x_{d+1} = t``.
    """
    if F.kind != "harmonic":
        raise ValueError(f"expected a harmonic system, got {F.kind!r}")
    G = _interior_gradient(F)
    d = F.d
    scale = float(np.sqrt(np.sum(np.abs(G) ** 2)))
    res = {}

    def rel(r: np.ndarray) -> float:
        num = float(np.sqrt(np.sum(np.abs(r) ** 2)))
        return 0.0 if num == 0 else num / scale

    for j in range(d + 1):
        for k in range(j + 1, d + 1):
            res[f"curl_{j + 1}{k + 1}"] = rel(G[j, k] - G[k, j])
    res["divergence"] = rel(sum(G[j, j] for j in range(d + 1)))
    return ResidualReport(res, F.times[1:-1].copy())


# ---------------------------------------------------------------- half derivative

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        _GL_CACHE[order] = leggauss(order)
    return _GL_CACHE[order]


def _panel_rule(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on every panel ``[edges[i], edges[i+1]]``."""
    x, w = _gauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    half = (b - a) / 2
    return a + half * (x + 1), half * w


def _split(edges: np.ndarray, parts: int) -> np.ndarray:
    a, b = edges[:-1, None], edges[1:, None]
    frac = np.arange(parts) / parts
    inner = (a + (b - a) * frac).reshape(-1)
    return np.append(inner, edges[-1])


def half_time_derivative(
    gprime: Callable[[np.ndarray], np.ndarray],
    t: float,
    *,
    t_max: float = math.inf,
    tail_tol: float = 1e-10,
    rtol: float = 1e-13,
    order: int = 16,
) -> complex:
    """``(i / sqrt(pi)) int_0^inf 2 g'(t + v^2) dv`` for a vectorized ``g'``.

    Panels in ``v`` double in width from ``min(sqrt(t), 1) / 4`` until
    ``|g'|`` drops below ``tail_tol`` times its largest sampled value; each
    panel is then split in halves until the composite Gauss-Legendre sum
    changes by less than ``rtol``.

    Raises :class:`QuadratureTailError` when ``g'`` has not decayed by
    ``t_max`` (or within ``v = 1e8``).

    >>> z = half_time_derivative(lambda s: -np.exp(-s), 1.0)
    >>> abs(z - (-1j) * math.exp(-1.0)) < 1e-12
    True
    """
    if not t > 0:
        raise ValueError("t must be positive")
    w0 = min(math.sqrt(t), 1.0) / 4
    edges = [0.0, w0]
    peak = float(np.max(np.abs(gprime(np.array([t, t + w0 * w0])))))
    quiet = 0
    while True:
        v = edges[-1]
        s = t + v * v
        if s > t_max or v > 1e8:
            raise QuadratureTailError(f"g' has not decayed below {tail_tol:g} of its peak by s = {min(s, t_max):g}")
        val = float(abs(gprime(np.array([s]))[0]))
        peak = max(peak, val)
        quiet = quiet + 1 if val <= tail_tol * peak else 0
        if quiet >= 2:
            break
        edges.append(2 * v)
    edges = np.array(edges)
    if peak == 0.0:
        return 0j
    prev = None
    for _ in range(12):
        nodes, weights = _panel_rule(edges, order)
        total = float(np.sum(weights * 2 * gprime(t + nodes * nodes)))
        if prev is not None and abs(total - prev) <= rtol * max(abs(total), 1e-300):
            break
        prev = total
        edges = _split(edges, 2)
    return 1j / math.sqrt(math.pi) * total


def _moment_tables(times: np.ndarray, report: np.ndarray, order: int = 12, rtol: float = 1e-12) -> np.ndarray:
    """``A[p, r, k] = int 2 (log s - log t_k)^p / s dv`` over panel ``k`` seen from slice ``report[r]``.

    Panel ``k`` spans ``s`` in ``[t_k, t_{k+1}]``, i.e. ``v`` in
    ``[sqrt(t_k - t_i), sqrt(t_{k+1} - t_i)]`` with ``s = t_i + v^2``.
    """
    T = len(times)
    A = np.zeros((3, len(report), T - 1))
    logt = np.log(times)
    for r, i in enumerate(report):
        ti = times[i]
        ks = np.arange(i, T - 1)
        edges = np.sqrt(np.maximum(times[i:] - ti, 0.0))
        parts = 1
        prev = None
        while True:
            sub = _split(edges, parts)
            nodes, weights = _panel_rule(sub, order)
            s = ti + nodes * nodes
            panel = np.repeat(ks, parts)
            delta = np.log(s) - logt[panel][:, None]
            base = 2 * weights / s
            cur = np.stack([np.add.reduceat((base * delta**p).sum(axis=1), np.arange(0, len(panel), parts)) for p in range(3)])
            if prev is not None and np.all(np.abs(cur - prev) <= rtol * np.maximum(np.abs(cur), 1e-300) + 1e-300):
                break
            if parts >= 64:
                break
            prev = cur
            parts *= 2
        A[:, r, i:] = cur
    return A


def slab_half_derivative(
    slab: Slab,
    report: np.ndarray | None = None,
    tail_tol: float = 1e-10,
) -> np.ndarray:
    """``d_t^{1/2}`` of every grid point of a slab, at the slice indices ``report``.

    ``g`` is the PCHIP interpolant of the slices in ``log t``, so on each
    interval ``g'(s) = y'(log s) / s`` with ``y'`` a quadratic in
    ``log s``.  The quadrature therefore reduces to three moment tables per
    reported slice, contracted with the interpolant's coefficients.  The
    integral is cut at the last slice, which is only allowed once
    ``|g'|`` there is below ``tail_tol`` times its peak over the slices.
    """
    times = slab.times
    T = len(times)
    report = np.arange(1, T - 1) if report is None else np.asarray(report)
    if np.any(report < 0) or np.any(report >= T - 1):
        raise ValueError("reported slices must lie before the last slice")
    flat = slab.values.reshape(T, -1)
    spline = PchipInterpolator(np.log(times), flat, axis=0)
    dy = spline.derivative()(np.log(times))
    gp = np.abs(dy) / times[:, None]
    peak = float(gp.max())
    if peak > 0 and float(gp[-1].max()) > tail_tol * peak:
        raise QuadratureTailError(
            f"|g'| at the top slice t={times[-1]:g} is {float(gp[-1].max()) / peak:.2e} of its peak; extend the ladder"
        )
    c = spline.c  # (4, T-1, N): y = c0 d^3 + c1 d^2 + c2 d + c3 on each interval
    A = _moment_tables(times, report)
    out = A[0] @ c[2] + 2 * (A[1] @ c[1]) + 3 * (A[2] @ c[0])
    out = (1j / math.sqrt(math.pi)) * out
    return out.reshape((len(report),) + slab.spec.shape)


# ---------------------------------------------------------------- caloric


def caloric_map(f: GridFunction, t_ladder: Ladder) -> CRSystem:
    """``(R_1 f * W_t, ..., R_d f * W_t, f * W_t)``."""
    if not f.is_real:
        raise ValueError("caloric_map expects real data")
    slabs = [heat_extend(riesz_transform(f, j), t_ladder) for j in range(f.spec.d)]
    slabs.append(heat_extend(f, t_ladder))
    return CRSystem.from_slabs(slabs, "temperature")


def _report_indices(times: np.ndarray, headroom: float) -> np.ndarray:
    idx = np.arange(1, len(times) - 1)
    idx = idx[times[idx] * headroom <= times[-1]]
    if len(idx) == 0:
        raise ValueError(f"no interior slice lies below t_max / {headroom:g}; extend the ladder")
    return idx


def temperature_cr_residual(F: CRSystem, headroom: float = 8.0, tail_tol: float = 1e-10) -> ResidualReport:
    """Residuals of the temperature Cauchy-Riemann conditions.

    * ``"1"``: ``sum_j d u_j/d x_j - i d_t^{1/2} u_{d+1}``
    * ``"2_jk"``: ``d u_j/d x_k - d u_k/d x_j`` for ``j < k <= d`` (only when ``d >= 2``)
    * ``"3_j"``: ``d u_{d+1}/d x_j + i d_t^{1/2} u_j``

    Each is relative to the ``L^2`` size of its two sides.  Only interior
    slices with ``t <= t_max / headroom`` are used, so the half derivative
    sees enough of the future.
    """
    if F.kind != "temperature":
        raise ValueError(f"expected a temperature system, got {F.kind!r}")
    if len(F.times) < 5:
        raise ValueError("temperature residuals need at least 5 slices")
    d = F.d
    report = _report_indices(F.times, headroom)
    half = [slab_half_derivative(F.component(j), report, tail_tol) for j in range(d + 1)]

    def dx(j: int, k: int) -> np.ndarray:
        return np.stack([partial_derivative(GridFunction(F.spec, F.values[i, j]), k).values for i in report])

    res = {}
    lhs = sum(dx(j, j) for j in range(d))
    rhs = 1j * half[d]
    res["1"] = relative_residual(lhs - rhs, lhs, rhs)
    for j in range(d):
        for k in range(j + 1, d):
            a, b = dx(j, k), dx(k, j)
            res[f"2_{j + 1}{k + 1}"] = relative_residual(a - b, a, b)
    for j in range(d):
        a = dx(d, j)
        b = -1j * half[j]
        res[f"3_{j + 1}"] = relative_residual(a - b, a, b)
    return ResidualReport(res, F.times[report].copy())


def temperature_symbol_residual(spec: GridSpec, t: float = 1.0) -> dict[str, float]:
    """The three conditions evaluated on Fourier symbols over the frequency lattice.

    With ``lambda = 4 pi^2 |xi|^2`` the slices of the caloric map carry the
    symbols ``e^{-lambda t}`` and ``-i xi_j/|xi| e^{-lambda t}``; ``d_t^{1/2}``
    acts as ``-i sqrt(lambda)`` and ``d/dx_j`` as ``2 pi i xi_j``.  Returns
    the largest absolute mismatch of each condition (zero up to rounding).
    """
    xi = frequencies(spec)
    lam = 4 * math.pi**2 * sum(x * x for x in xi)
    decay = np.exp(-lam * t)
    half = -1j * np.sqrt(lam)
    last = decay
    comps = [riesz_symbol(spec, j) * decay for j in range(spec.d)]
    # the Nyquist plane carries no Riesz symbol on the grid; compare off it
    nyq = np.fft.fftfreq(spec.n, spec.h)[spec.n // 2]
    keep = np.ones(spec.shape, dtype=bool)
    for x in xi:
        keep &= x != nyq
    ddx = [2j * math.pi * x for x in xi]
    out = {}
    c1 = sum(ddx[j] * comps[j] for j in range(spec.d)) - 1j * half * last
    out["1"] = float(np.max(np.abs(c1[keep])))
    c2 = [ddx[k] * comps[j] - ddx[j] * comps[k] for j in range(spec.d) for k in range(j + 1, spec.d)]
    out["2"] = float(max((np.max(np.abs(c[keep])) for c in c2), default=0.0))
    c3 = [ddx[j] * last + 1j * half * comps[j] for j in range(spec.d)]
    out["3"] = float(max(np.max(np.abs(c[keep])) for c in c3))
    return out


def heat_residual(u: Slab) -> ResidualReport:
    """Relative residual of ``d_t u = Delta_x u`` on interior slices."""
    return ResidualReport({"heat": heat_equation_residual(u)}, u.times[1:-1].copy())


def caloric_norm(F: CRSystem, e: Exponents, r_ladder: Ladder | None = None) -> NormReport:
    """``max_r max_t ||St^alpha_r |F(., t)| ||_{p,q}`` over the stored heights.

    ``terms`` are indexed by ``r``; ``breakdown["t_argmax"]`` records the
    height attaining each term.
    """
    e.theorem_mode(F.d)
    ladder = DEFAULT_R_LADDER if r_ladder is None else r_ladder
    mag = F.magnitude()
    terms, arg = [], []
    for r in ladder:
        per_t = [dilated_amalgam_norm(GridFunction(F.spec, mag[i]), e.p, e.q, e.alpha, r) for i in range(len(F.times))]
        i = int(np.argmax(per_t))
        terms.append(per_t[i])
        arg.append(F.times[i])
    return NormReport.from_terms(terms, ladder, {"t_argmax": np.array(arg)})


def dilate_system(F: CRSystem, alpha: float, rho: float) -> CRSystem:
    """``St^alpha_rho`` applied to every slice, with heights relabelled.

    Spatial dilation by ``rho`` maps harmonic heights ``t -> rho t`` and
    caloric heights ``t -> rho^2 t`` (the heat equation scales parabolically).
    """
    if not is_power_of_two(rho):
        raise ValueError(f"dilation factor must be a power of two, got {rho}")
    c = rho ** (-F.d / alpha)
    times = F.times * (rho if F.kind == "harmonic" else rho * rho)
    return CRSystem(F.spec.scaled(rho), times, c * F.values, F.kind)
