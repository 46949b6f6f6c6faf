"""Poisson, heat, truncated Riesz and mollifier kernels sampled on a grid.

Convolution on the grid is periodic, so by default every kernel is the
*periodization* ``sum_n K(x + n L)`` of its closed form, evaluated to
machine precision (closed form, theta series or Ewald sum as appropriate).
``periodic=False`` returns plain samples of the free-space formula instead.

Each constructor reports ``tail_mass``, the free-space mass of the kernel
outside the ball of radius ``L/2``.  A :class:`KernelRangeWarning` is issued
when a kernel is badly resolved by the grid or spills far past the box.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, gamma

from .grid import GridFunction, GridSpec

__all__ = [
    "KernelSample",
    "KernelRangeWarning",
    "poisson_kernel",
    "heat_kernel",
    "riesz_kernel_truncated",
    "periodic_riesz_kernel",
    "mollifier",
    "MOLLIFIERS",
    "riesz_constant",
]

# Gaussian terms below exp(-40) ~ 4e-18 are dropped
_EXP_CUT = 40.0


class KernelRangeWarning(UserWarning):
    """A kernel is under-resolved by the grid or leaves too much mass outside the box."""


@dataclass(frozen=True)
class KernelSample:
    """A kernel ``kind`` at scale ``t`` sampled at the grid points ``x_j``."""

    kind: str
    t: float
    values: GridFunction
    tail_mass: float = 0.0

    @property
    def spec(self) -> GridSpec:
        return self.values.spec

    @property
    def mass(self) -> float:
        return float(self.spec.cell_volume * np.sum(self.values.values))

    def at(self, *x: float) -> float:
        return self.values.at(*x)


def riesz_constant(d: int) -> float:
    """``Gamma((d+1)/2) / pi^((d+1)/2)``, the constant in ``P`` and ``K_j``."""
    return float(gamma((d + 1) / 2) / math.pi ** ((d + 1) / 2))


def _check_t(t: float) -> float:
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"kernel scale must be positive and finite, got {t}")
    return t


def _warn(msg: str) -> None:
    warnings.warn(msg, KernelRangeWarning, stacklevel=3)


def _on_grid(spec: GridSpec, offset_values: np.ndarray) -> np.ndarray:
    # circular (offset) layout -> grid layout starting at x = -L/2
    return np.fft.fftshift(offset_values)


# ---------------------------------------------------------------- Gaussians


def _periodic_gaussian_1d(x: np.ndarray, var: float, L: float) -> np.ndarray:
    """``sum_n exp(-(x+nL)^2 / 2 var) / sqrt(2 pi var)``."""
    sigma = math.sqrt(var)
    if sigma <= L / 4:
        K = int(math.ceil(math.sqrt(2 * _EXP_CUT * var) / L)) + 1
        out = np.zeros_like(x, dtype=float)
        norm = math.sqrt(2 * math.pi * var)
        for k in range(-K, K + 1):
            y = x + k * L
            out += np.exp(-(y * y) / (2 * var))
        return out / norm
    # wide Gaussian: the theta series in Fourier form converges fast
    kmax = int(math.ceil(L * math.sqrt(_EXP_CUT / (2 * math.pi**2 * var)))) + 1
    out = np.full_like(x, 1.0, dtype=float)
    for k in range(1, kmax + 1):
        out += 2 * math.exp(-2 * math.pi**2 * var * k * k / L**2) * np.cos(2 * math.pi * k * x / L)
    return out / L


def _separable_gaussian(spec: GridSpec, var: float, periodic: bool) -> np.ndarray:
    x = spec.axis()
    if periodic:
        g = _periodic_gaussian_1d(x, var, spec.L)
    else:
        g = np.exp(-(x * x) / (2 * var)) / math.sqrt(2 * math.pi * var)
    if spec.d == 1:
        return g
    return g[:, None] * g[None, :]


def _gaussian_tail(d: int, var: float, R: float) -> float:
    # mass of N(0, var I_d) outside |x| = R
    z = R * R / (2 * var)
    if d == 1:
        return float(erfc(math.sqrt(z)))
    return math.exp(-z)


# ---------------------------------------------------------------- Poisson


def _poisson_tail(d: int, t: float, R: float) -> float:
    if d == 1:
        return 1.0 - 2.0 / math.pi * math.atan(R / t)
    return t / math.sqrt(t * t + R * R)


def _poisson_periodic_1d(x: np.ndarray, t: float, L: float) -> np.ndarray:
    # sum_n P_t(x + nL) = (1/L) sinh(at) / (cosh(at) - cos(ax)), a = 2 pi / L,
    # with the denominator written as 2 (sinh^2(at/2) + sin^2(ax/2)) to avoid cancellation
    a = 2 * math.pi / L
    sh = math.sinh(a * t / 2)
    s = np.sin(a * x / 2)
    return math.sinh(a * t) / (2 * (sh * sh + s * s)) / L


def _poisson_periodic_2d(spec: GridSpec, t: float) -> np.ndarray:
    n, L, m = spec.n, spec.L, spec.m
    c = riesz_constant(2)
    if t * m >= 1:
        # Fourier coefficients exp(-2 pi t |xi|), folded over the aliases of the lattice
        M = max(int(math.ceil(41.0 / (2 * math.pi * t * m) - 0.5)), 0)
        k = np.fft.fftfreq(n, 1.0 / n)
        coef = np.zeros((n, n))
        for a1 in range(-M, M + 1):
            xi1 = (k + a1 * n) / L
            for a2 in range(-M, M + 1):
                xi2 = (k + a2 * n) / L
                r = np.sqrt(xi1[:, None] ** 2 + xi2[None, :] ** 2)
                coef += np.exp(-2 * math.pi * t * r)
        vals = np.real(np.fft.ifft2(coef)) * (n * n / (L * L))
        return _on_grid(spec, vals)
    # narrow kernel: real-space images plus a uniform far-field correction
    K = 4
    x1, x2 = spec.coords()
    out = np.zeros(spec.shape)
    for a1 in range(-K, K + 1):
        y1 = x1 + a1 * L
        for a2 in range(-K, K + 1):
            y2 = x2 + a2 * L
            q = t * t + y1 * y1 + y2 * y2
            out += c * t / (q * np.sqrt(q))
    s = (K + 0.5) * L
    out += 2 * math.sqrt(2) * t / (math.pi * s) / (L * L)
    return out


def poisson_kernel(spec: GridSpec, t: float, periodic: bool = True) -> KernelSample:
    """Poisson kernel ``P_t(x) = c_d t / (t^2 + |x|^2)^((d+1)/2)`` on the grid.

    ``c_d = Gamma((d+1)/2) / pi^((d+1)/2)``.  The periodized kernel has unit
    mass up to quadrature error; the free-space samples lose ``tail_mass``.

    >>> from fofana_lab.grid import make_grid
    >>> k = poisson_kernel(make_grid(1, 16, 8), 1.0, periodic=False)
    >>> round(k.at(0.0), 10)
    0.3183098862
    """
    t = _check_t(t)
    d, L = spec.d, spec.L
    tail = _poisson_tail(d, t, L / 2)
    if tail > 1e-4:
        _warn(f"Poisson kernel at t={t} has free-space mass {tail:.2e} outside |x| < L/2")
    if t < spec.h:
        _warn(f"Poisson kernel at t={t} is narrower than the grid step h={spec.h}")
    if not periodic:
        c = riesz_constant(d)
        q = t * t + sum(x * x for x in spec.coords())
        vals = c * t / q ** ((d + 1) / 2)
    elif d == 1:
        vals = _poisson_periodic_1d(spec.axis(), t, L)
    else:
        vals = _poisson_periodic_2d(spec, t)
    return KernelSample("poisson", t, GridFunction(spec, vals), tail)


def heat_kernel(spec: GridSpec, t: float, periodic: bool = True) -> KernelSample:
    """Heat kernel ``W_t(x) = exp(-|x|^2 / 4t) / (4 pi t)^(d/2)``.

    >>> from fofana_lab.grid import make_grid
    >>> k = heat_kernel(make_grid(1, 16, 8), 1 / (4 * math.pi), periodic=False)
    >>> float(k.at(0.0))
    1.0
    """
    t = _check_t(t)
    st = math.sqrt(t)
    if st < 2 * spec.h:
        _warn(f"heat kernel at t={t}: sqrt(t) < 2h, poorly resolved")
    if st > spec.L / 8:
        _warn(f"heat kernel at t={t}: sqrt(t) > L/8, wraps around the box")
    var = 2 * t
    if periodic:
        vals = _separable_gaussian(spec, var, True)
    else:
        r2 = sum(x * x for x in spec.coords())
        vals = np.exp(-r2 / (4 * t)) / (4 * math.pi * t) ** (spec.d / 2)
    return KernelSample("heat", t, GridFunction(spec, vals), _gaussian_tail(spec.d, var, spec.L / 2))


# ---------------------------------------------------------------- Riesz


def _ewald_riesz_2d(x1: np.ndarray, x2: np.ndarray, j: int, L: float) -> np.ndarray:
    """Periodized ``x_j / (2 pi |x|^3)`` (principal-value sense) by Ewald summation.

    ``x1, x2`` are minimal-image offsets.  The real-space part uses images in
    ``{-1, 0, 1}^2``; the reciprocal part is an explicit sine series.
    """
    c = 1.0 / (2 * math.pi)
    beta = 6.0 / L
    out = np.zeros_like(x1, dtype=float)
    for a1 in (-1, 0, 1):
        for a2 in (-1, 0, 1):
            y1 = x1 + a1 * L
            y2 = x2 + a2 * L
            r2 = y1 * y1 + y2 * y2
            safe = r2 > 0
            r2s = np.where(safe, r2, 1.0)
            r = np.sqrt(r2s)
            yj = y1 if j == 0 else y2
            term = c * yj * (erfc(beta * r) / (r2s * r) + 2 * beta / math.sqrt(math.pi) * np.exp(-beta * beta * r2s) / r2s)
            out += np.where(safe, term, 0.0)
    kmax = int(math.ceil(6 * beta * L / math.pi)) + 1
    for k1 in range(-kmax, kmax + 1):
        for k2 in range(-kmax, kmax + 1):
            if (k1, k2) <= (0, 0):
                continue  # use the (k, -k) pairing: sum over a half lattice, doubled
            xi1, xi2 = k1 / L, k2 / L
            xi = math.hypot(xi1, xi2)
            w = erfc(math.pi * xi / beta)
            if w < 1e-18:
                continue
            xij = xi1 if j == 0 else xi2
            out += (2 * xij / xi * w / (L * L)) * np.sin(2 * math.pi * (x1 * xi1 + x2 * xi2))
    return out


def periodic_riesz_kernel(spec: GridSpec, j: int) -> np.ndarray:
    """Periodized Riesz kernel at the minimal-image offsets (circular layout).

    In 1-D this is ``cot(pi x / L) / L``; in 2-D an Ewald sum.  The value at
    the zero offset is set to 0.
    """
    offs = spec.offsets()
    if spec.d == 1:
        x = offs[0]
        out = np.zeros_like(x)
        nz = x != 0
        out[nz] = 1.0 / (spec.L * np.tan(math.pi * x[nz] / spec.L))
        # the antipodal point is its own mirror image on the circle
        out[np.isclose(np.abs(x), spec.L / 2)] = 0.0
        return out
    out = _ewald_riesz_2d(offs[0], offs[1], j, spec.L)
    out[offs[j] == -spec.L / 2] = 0.0
    return out


def riesz_kernel_truncated(spec: GridSpec, j: int, eps: float, periodic: bool = False) -> KernelSample:
    """Riesz kernel ``K_j(x) = c_d x_j / |x|^(d+1)`` set to 0 on ``|x| <= eps``.

    Samples sit at the grid points ``x``.  Points on the seam ``x_j = -L/2``
    are their own mirror images on the torus and are set to 0, which keeps
    the sampled kernel odd.  With ``periodic=True`` the torus kernel
    (:func:`periodic_riesz_kernel`) is truncated instead.
    """
    d = spec.d
    if not 0 <= j < d:
        raise ValueError(f"Riesz index j={j} out of range for d={d} (0-based)")
    eps = float(eps)
    if not eps >= 2 * spec.h:
        raise ValueError(f"truncation radius eps={eps} must be at least 2h={2 * spec.h}")
    coords = spec.coords()
    r2 = sum(x * x for x in coords)
    keep = r2 > eps * eps
    if periodic:
        vals = _on_grid(spec, periodic_riesz_kernel(spec, j))
    else:
        c = riesz_constant(d)
        r2s = np.where(keep, r2, 1.0)
        vals = c * coords[j] / r2s ** ((d + 1) / 2)
        vals[coords[j] == -spec.L / 2] = 0.0
    vals = np.where(keep, vals, 0.0)
    return KernelSample(f"riesz_{j}", eps, GridFunction(spec, vals), 0.0)


# ---------------------------------------------------------------- mollifiers


def _cos2_bump(spec: GridSpec, t: float) -> np.ndarray:
    # phi(x) = cos^2(pi |x| / 2) on |x| < 1, periodized, at scale t
    K = int(math.ceil(t / spec.L)) + 1
    coords = spec.coords()
    out = np.zeros(spec.shape)
    shifts = [(a,) for a in range(-K, K + 1)]
    if spec.d == 2:
        shifts = [(a, b) for a in range(-K, K + 1) for b in range(-K, K + 1)]
    for s in shifts:
        r = np.sqrt(sum((x + a * spec.L) ** 2 for x, a in zip(coords, s))) / t
        out += np.where(r < 1, np.cos(math.pi * r / 2) ** 2, 0.0)
    return out


def mollifier(spec: GridSpec, t: float, kind: str = "gaussian") -> KernelSample:
    """Mollifier ``phi_t`` renormalized to unit discrete mass.

    ``kind="gaussian"`` uses ``phi(x) = exp(-pi |x|^2)``, periodized;
    ``kind="cos2"`` the compactly supported bump ``cos^2(pi |x| / 2)`` on
    ``|x| < 1``, used to check that results do not depend on the choice.
    """
    t = _check_t(t)
    if kind == "gaussian":
        var = t * t / (2 * math.pi)
        raw = _separable_gaussian(spec, var, True)
        tail = _gaussian_tail(spec.d, var, spec.L / 2)
    elif kind == "cos2":
        raw = _cos2_bump(spec, t)
        tail = 0.0 if t <= spec.L / 2 else 1.0
    else:
        raise ValueError(f"unknown mollifier kind {kind!r}")
    if tail > 1e-6:
        _warn(f"mollifier at t={t} spills past the box (tail {tail:.2e})")
    vals = raw / (spec.cell_volume * np.sum(raw))
    return KernelSample("mollifier", t, GridFunction(spec, vals), tail)


MOLLIFIERS = ("gaussian", "cos2")
