"""Periodic convolution, Fourier multipliers, Riesz transforms and half-space extensions.

Transform convention: ``f^(xi) = h^d sum_x f(x) exp(-2 pi i x.xi)`` with
``xi`` on the lattice ``Z^d / L``.  In this convention the Riesz symbol is
``-i xi_j / |xi|``, the Poisson symbol ``exp(-2 pi t |xi|)`` and the heat
symbol ``exp(-4 pi^2 t |xi|^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _accel
from .grid import GridFunction, GridSpec, Ladder, laplacian
from .kernels import KernelSample, heat_kernel, poisson_kernel, riesz_kernel_truncated

__all__ = [
    "Slab",
    "convolve",
    "frequencies",
    "forward_transform",
    "apply_multiplier",
    "riesz_symbol",
    "poisson_symbol",
    "heat_symbol",
    "riesz_transform",
    "riesz_pv_oracle",
    "poisson_extend",
    "heat_extend",
    "extend",
    "t_derivatives",
    "laplace_residual",
    "heat_equation_residual",
    "relative_residual",
]


# ---------------------------------------------------------------- slabs


@dataclass(frozen=True, eq=False)
class Slab:
    """Samples ``u(x, t)`` of a function on the upper half-space at a few heights.

    ``values[i]`` holds the slice at ``times[i]``; times increase strictly.
    """

    spec: GridSpec
    times: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        vals = np.asarray(self.values)
        if len(times) < 3:
            raise ValueError(f"a slab needs at least 3 slices, got {len(times)}")
        if not np.all(np.diff(times) > 0) or not times[0] > 0:
            raise ValueError("slab heights must be positive and strictly increasing")
        if vals.shape != (len(times),) + self.spec.shape:
            raise ValueError(f"slab values must have shape {(len(times),) + self.spec.shape}, got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("slab values must be finite")
        times = times.copy()
        vals = vals.copy()
        times.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_slices(cls, slices: Sequence[tuple[float, GridFunction]]) -> "Slab":
        if not slices:
            raise ValueError("empty slab")
        spec = slices[0][1].spec
        for _, u in slices:
            if u.spec != spec:
                raise ValueError("all slab slices must share a grid")
        return cls(spec, np.array([t for t, _ in slices]), np.stack([u.values for _, u in slices]))

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, i: int) -> GridFunction:
        return GridFunction(self.spec, self.values[i])

    @property
    def slices(self) -> list[tuple[float, GridFunction]]:
        return [(float(t), self[i]) for i, t in enumerate(self.times)]

    def __iter__(self) -> Iterator[tuple[float, GridFunction]]:
        return iter(self.slices)

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "Slab":
        """Apply ``fn`` to the stacked values, keeping the heights."""
        return Slab(self.spec, self.times, fn(self.values))

    def abs(self) -> "Slab":
        return self.map(np.abs)


# ---------------------------------------------------------------- Fourier side


def frequencies(spec: GridSpec) -> tuple[np.ndarray, ...]:
    """Frequency arrays ``xi`` in FFT order (``ij`` indexing)."""
    xi = np.fft.fftfreq(spec.n, spec.h)
    if spec.d == 1:
        return (xi,)
    return tuple(np.meshgrid(xi, xi, indexing="ij"))


def _fftn(v: np.ndarray) -> np.ndarray:
    return np.fft.fftn(v, axes=tuple(range(v.ndim)))


def _ifftn(v: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(v, axes=tuple(range(v.ndim)))


def forward_transform(u: GridFunction) -> np.ndarray:
    """``h^d sum_x u(x) exp(-2 pi i x.xi)`` at :func:`frequencies` (FFT order)."""
    spec = u.spec
    k = np.fft.fftfreq(spec.n, 1.0 / spec.n).astype(np.int64)
    # the grid starts at -L/2, which contributes (-1)^k per axis
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    phase = sign if spec.d == 1 else sign[:, None] * sign[None, :]
    return spec.cell_volume * phase * _fftn(u.values)


def _as_real(spec: GridSpec, v: np.ndarray, tol: float, what: str) -> GridFunction:
    scale = max(float(np.max(np.abs(v))), 1.0)
    resid = float(np.max(np.abs(v.imag))) if v.size else 0.0
    if resid > tol * scale:
        raise ArithmeticError(f"{what}: imaginary residue {resid:.2e} exceeds {tol:.0e}")
    return GridFunction(spec, v.real)


def apply_multiplier(u: GridFunction, symbol, real: bool | None = None) -> GridFunction:
    """Multiply the transform of ``u`` by ``symbol`` and transform back.

    ``symbol`` is an array on the frequency lattice (FFT order, shape
    ``spec.shape``) or a callable receiving the :func:`frequencies` arrays.
    ``real=None`` returns a real result when ``u`` is real and the imaginary
    part is negligible, otherwise complex.
    """
    spec = u.spec
    table = symbol(*frequencies(spec)) if callable(symbol) else np.asarray(symbol)
    table = np.broadcast_to(table, spec.shape) if table.ndim == 0 else table
    if table.shape != spec.shape:
        raise ValueError(f"symbol table has shape {table.shape}, grid frequency lattice is {spec.shape}")
    out = _ifftn(_fftn(u.values) * table)
    if real is None:
        imag = float(np.max(np.abs(out.imag)))
        real = u.is_real and imag <= 1e-10 * max(float(np.max(np.abs(out.real))), 1.0)
    if real:
        return _as_real(spec, out, 1e-10, "apply_multiplier")
    return GridFunction(spec, out)


def riesz_symbol(spec: GridSpec, j: int) -> np.ndarray:
    """``-i xi_j / |xi|``, zero at ``xi = 0`` and on the Nyquist plane of axis ``j``.

    The Nyquist frequency has no partner of opposite sign on the grid;
    zeroing it there keeps the symbol odd, so real input stays real.
    """
    if not 0 <= j < spec.d:
        raise ValueError(f"Riesz index j={j} out of range for d={spec.d} (0-based)")
    xi = frequencies(spec)
    r = np.sqrt(sum(x * x for x in xi))
    sym = np.zeros(spec.shape, dtype=complex)
    nz = r > 0
    sym[nz] = -1j * xi[j][nz] / r[nz]
    nyq = np.fft.fftfreq(spec.n, spec.h)[spec.n // 2]
    sym[xi[j] == nyq] = 0.0
    return sym


def poisson_symbol(spec: GridSpec, t: float) -> np.ndarray:
    xi = frequencies(spec)
    return np.exp(-2 * math.pi * t * np.sqrt(sum(x * x for x in xi)))


def heat_symbol(spec: GridSpec, t: float) -> np.ndarray:
    xi = frequencies(spec)
    return np.exp(-4 * math.pi**2 * t * sum(x * x for x in xi))


# ---------------------------------------------------------------- convolution


def _kernel_fft(k: GridFunction) -> np.ndarray:
    # grid layout starts at -L/2; move the x = 0 sample to index 0
    return _fftn(np.fft.ifftshift(k.values))


def convolve(u: GridFunction, v: GridFunction) -> GridFunction:
    """Periodic convolution ``h^d sum_y u(y) v(x - y)`` via the FFT."""
    if u.spec != v.spec:
        raise ValueError("convolve: grid functions live on different grids")
    out = u.spec.cell_volume * _ifftn(_fftn(u.values) * _kernel_fft(v))
    if u.is_real and v.is_real:
        return GridFunction(u.spec, out.real)
    return GridFunction(u.spec, out)


def riesz_transform(u: GridFunction, j: int) -> GridFunction:
    """``R_j u`` through the multiplier ``-i xi_j / |xi|``; annihilates constants."""
    sym = riesz_symbol(u.spec, j)
    if u.is_real:
        return _as_real(u.spec, _ifftn(_fftn(u.values) * sym), 1e-10, "riesz_transform")
    return GridFunction(u.spec, _ifftn(_fftn(u.values) * sym))


def riesz_pv_oracle(u: GridFunction, j: int, eps: float | None = None, periodic: bool = True) -> GridFunction:
    """Direct O(N^2) truncated principal-value sum ``h^d sum_{|x-y|>eps} K_j(x-y) u(y)``.

    An independent check of :func:`riesz_transform` that never touches the
    FFT.  The default kernel is the torus-periodized one, which is what a
    periodic multiplier corresponds to; ``periodic=False`` uses the plain
    free-space kernel.  ``eps`` defaults to ``4h``.
    """
    spec = u.spec
    eps = 4 * spec.h if eps is None else eps
    ker = riesz_kernel_truncated(spec, j, eps, periodic=periodic)
    # circular layout: entry a is the kernel at displacement a*h
    table = np.fft.ifftshift(ker.values.values)
    u2 = u.values.reshape(1, -1) if spec.d == 1 else u.values
    k2 = table.reshape(1, -1) if spec.d == 1 else table
    out = _accel.circular_direct(u2, k2) * spec.cell_volume
    return GridFunction(spec, out.reshape(spec.shape))


# ---------------------------------------------------------------- extensions


def extend(f: GridFunction, t_ladder: Ladder | Sequence[float], kernel: Callable[[GridSpec, float], KernelSample]) -> Slab:
    """Slab of ``f * K_t`` for every height ``t`` of the ladder."""
    times = np.asarray(list(t_ladder), dtype=float)
    F = _fftn(f.values)
    vals = []
    for t in times:
        k = kernel(f.spec, float(t)).values
        out = f.spec.cell_volume * _ifftn(F * _kernel_fft(k))
        vals.append(out.real if f.is_real else out)
    return Slab(f.spec, times, np.stack(vals))


def poisson_extend(f: GridFunction, t_ladder: Ladder | Sequence[float]) -> Slab:
    """Harmonic extension ``u(x, t) = (f * P_t)(x)``."""
    return extend(f, t_ladder, poisson_kernel)


def heat_extend(f: GridFunction, t_ladder: Ladder | Sequence[float]) -> Slab:
    """Caloric extension ``u(x, t) = (f * W_t)(x)``."""
    return extend(f, t_ladder, heat_kernel)


# ---------------------------------------------------------------- t-derivatives


def t_derivatives(slab: Slab) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Three-point nonuniform first and second ``t``-derivatives on interior slices.

    Returns ``(times, du, d2u)`` with ``times = slab.times[1:-1]``.
    """
    t = slab.times
    v = slab.values
    h1 = (t[1:-1] - t[:-2]).reshape((-1,) + (1,) * slab.spec.d)
    h2 = (t[2:] - t[1:-1]).reshape(h1.shape)
    # written in differences so that constants are annihilated exactly
    dm = v[:-2] - v[1:-1]
    dp = v[2:] - v[1:-1]
    du = -h2 / (h1 * (h1 + h2)) * dm + h1 / (h2 * (h1 + h2)) * dp
    d2u = 2 * (dm / (h1 * (h1 + h2)) + dp / (h2 * (h1 + h2)))
    return t[1:-1].copy(), du, d2u


def _laplacians(slab: Slab) -> np.ndarray:
    return np.stack([laplacian(slab[i]).values for i in range(1, len(slab) - 1)])


def relative_residual(residual: np.ndarray, *terms: np.ndarray) -> float:
    """``||residual|| / sqrt(sum ||term||^2)``, 0 when the residual vanishes."""
    num = float(np.sqrt(np.sum(np.abs(residual) ** 2)))
    if num == 0.0:
        return 0.0
    den = float(np.sqrt(sum(np.sum(np.abs(t) ** 2) for t in terms)))
    return num / den if den > 0 else math.inf


def laplace_residual(slab: Slab) -> float:
    """Relative ``L^2`` size of ``Delta_x u + d_t^2 u`` over interior slices."""
    _, _, d2u = t_derivatives(slab)
    lap = _laplacians(slab)
    return relative_residual(lap + d2u, lap, d2u)


def heat_equation_residual(slab: Slab) -> float:
    """Relative ``L^2`` size of ``d_t u - Delta_x u`` over interior slices."""
    _, du, _ = t_derivatives(slab)
    lap = _laplacians(slab)
    return relative_residual(du - lap, du, lap)
