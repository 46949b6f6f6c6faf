"""Sampled functions on periodic grids aligned with the unit-cube partition.

A :class:`GridSpec` describes the torus ``[-L/2, L/2)^d`` sampled with ``m``
points per unit length.  Sample ``j`` sits at ``x_j = -L/2 + j*h`` and stands
for the cell ``[x_j, x_j + h)``; integrals are ``h**d``-weighted sums.

Dilations by powers of two rescale the grid itself (``L -> rho*L``,
``m -> m/rho``), so internal specs may carry dyadic-rational ``L`` and ``m``.
:func:`make_grid` is the validating constructor for user-facing grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "GridSpec",
    "GridFunction",
    "Ladder",
    "make_grid",
    "sample",
    "cube_slices",
    "partial_derivative",
    "second_derivative",
    "laplacian",
    "resample_dyadic",
    "is_power_of_two",
]


def is_power_of_two(x: float) -> bool:
    """True if ``x`` is ``2**k`` for some integer ``k`` (negative allowed)."""
    if not (isinstance(x, (int, float, np.integer, np.floating)) and x > 0):
        return False
    if not math.isfinite(x):
        return False
    mant, _ = math.frexp(float(x))
    return mant == 0.5


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on ``[-L/2, L/2)^d`` with ``m`` samples per unit.

    Use :func:`make_grid` to build validated grids; the bare constructor
    accepts the dyadic-rational specs produced by exact dilation.
    """

    d: int
    L: float
    m: float

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.d}")
        if not (self.L > 0 and self.m > 0):
            raise ValueError("L and m must be positive")
        n = self.L * self.m
        if n != round(n) or round(n) < 2 or round(n) % 2:
            raise ValueError(f"L*m must be an even integer >= 2, got {n}")
        if not is_power_of_two(self.m):
            raise ValueError(f"m must be a power of two, got {self.m}")

    @property
    def h(self) -> float:
        return 1.0 / self.m

    @property
    def n(self) -> int:
        """Samples per axis."""
        return int(round(self.L * self.m))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n**self.d

    @property
    def cell_volume(self) -> float:
        return self.h**self.d

    @property
    def origin_index(self) -> int:
        """Index of the sample at ``x = 0`` along each axis."""
        return self.n // 2

    @property
    def n_cubes(self) -> int:
        """Number of unit cubes ``Q_k`` meeting the box."""
        return int(math.ceil(self.L / 2)) ** self.d * 2**self.d

    def axis(self) -> np.ndarray:
        return -self.L / 2 + np.arange(self.n) * self.h

    def coords(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays broadcast to :attr:`shape` (``ij`` indexing)."""
        x = self.axis()
        if self.d == 1:
            return (x,)
        return tuple(np.meshgrid(x, x, indexing="ij"))

    def offsets(self) -> tuple[np.ndarray, ...]:
        """Minimal-image displacement ``x_j - 0`` of every sample, per axis.

        Index ``a`` along an axis maps to displacement ``a*h`` folded into
        ``[-L/2, L/2)``; this is the layout used by circular kernels.
        """
        a = np.arange(self.n)
        a = np.where(a >= self.n // 2, a - self.n, a) * self.h
        if self.d == 1:
            return (a,)
        return tuple(np.meshgrid(a, a, indexing="ij"))

    def radius(self) -> np.ndarray:
        """``|x|`` on the grid."""
        return np.sqrt(sum(c * c for c in self.coords()))

    def scaled(self, rho: float) -> "GridSpec":
        """Grid with all coordinates multiplied by the dyadic factor ``rho``."""
        if not is_power_of_two(rho):
            raise ValueError(f"scale factor must be a power of two, got {rho}")
        return GridSpec(self.d, self.L * rho, self.m / rho)


def make_grid(d: int, L: int, m: int) -> GridSpec:
    """Validated grid: ``d`` in {1, 2}, ``L`` even and >= 2, ``m`` a power of two >= 2.

    >>> make_grid(1, 16, 64).size
    1024
    """
    if d not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {d}")
    if int(L) != L or L < 2 or int(L) % 2:
        raise ValueError(f"box side L must be an even integer >= 2, got {L}")
    if int(m) != m or m < 2 or not is_power_of_two(m):
        raise ValueError(f"samples per unit m must be a power of two >= 2, got {m}")
    return GridSpec(int(d), float(L), float(m))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a function on a :class:`GridSpec` (immutable).

    Values are real or complex and must be finite.
    """

    spec: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if not (np.issubdtype(vals.dtype, np.floating) or np.issubdtype(vals.dtype, np.complexfloating)):
            vals = vals.astype(float)
        if vals.size != self.spec.size:
            raise ValueError(f"expected {self.spec.size} samples, got {vals.size}")
        vals = vals.reshape(self.spec.shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid function values must be finite")
        vals = np.array(vals, copy=True)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    # arithmetic helpers keep the grid and refuse mismatched grids
    def _check(self, other: "GridFunction") -> None:
        if other.spec != self.spec:
            raise ValueError("grid functions live on different grids")

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.spec, self.values + other.values)
        return GridFunction(self.spec, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.spec, self.values - other.values)
        return GridFunction(self.spec, self.values - other)

    def __neg__(self):
        return GridFunction(self.spec, -self.values)

    def __mul__(self, c):
        if isinstance(c, GridFunction):
            self._check(c)
            return GridFunction(self.spec, self.values * c.values)
        return GridFunction(self.spec, self.values * c)

    __rmul__ = __mul__

    def abs(self) -> "GridFunction":
        return GridFunction(self.spec, np.abs(self.values))

    @property
    def real(self) -> "GridFunction":
        return GridFunction(self.spec, np.real(self.values))

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @cached_property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def at(self, *x: float):
        """Value at the grid point with coordinates ``x`` (must be a grid point)."""
        idx = []
        for xi in x:
            j = (xi + self.spec.L / 2) * self.spec.m
            if abs(j - round(j)) > 1e-9:
                raise ValueError(f"{xi} is not a grid coordinate")
            idx.append(int(round(j)) % self.spec.n)
        return self.values[tuple(idx)]

    @classmethod
    def zeros(cls, spec: GridSpec) -> "GridFunction":
        return cls(spec, np.zeros(spec.shape))

    @classmethod
    def constant(cls, spec: GridSpec, c: float) -> "GridFunction":
        return cls(spec, np.full(spec.shape, c))


@dataclass(frozen=True)
class Ladder:
    """Finite geometric ladder ``base * ratio**k``, ``0 <= k < count``.

    Stands in for a continuous supremum over a positive parameter.
    """

    base: float
    ratio: float
    count: int

    def __post_init__(self):
        if not self.base > 0:
            raise ValueError("ladder base must be positive")
        if not self.ratio > 1:
            raise ValueError("ladder ratio must exceed 1")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError("ladder count must be a positive integer")

    @classmethod
    def dyadic(cls, kmin: int, kmax: int) -> "Ladder":
        """``{2**k : kmin <= k <= kmax}``."""
        if kmax < kmin:
            raise ValueError("empty dyadic ladder")
        return cls(2.0**kmin, 2.0, kmax - kmin + 1)

    @classmethod
    def spanning(cls, lo: float, hi: float, ratio: float) -> "Ladder":
        """Shortest ladder starting at ``lo`` whose top member reaches ``hi``."""
        count = int(math.ceil(math.log(hi / lo) / math.log(ratio) - 1e-12)) + 1
        return cls(lo, ratio, max(count, 1))

    @cached_property
    def members(self) -> np.ndarray:
        if self.ratio == 2.0:
            # exact powers of two keep dilation reindexing bit-exact
            k = np.arange(self.count, dtype=float)
            return self.base * np.exp2(k)
        return self.base * self.ratio ** np.arange(self.count, dtype=float)

    @property
    def is_dyadic(self) -> bool:
        return self.ratio == 2.0 and is_power_of_two(self.base)

    @property
    def top(self) -> float:
        return float(self.members[-1])

    def __len__(self) -> int:
        return self.count

    def __iter__(self):
        return iter(float(v) for v in self.members)

    def __contains__(self, value) -> bool:
        return bool(np.any(self.members == value))

    def scaled(self, rho: float) -> "Ladder":
        """The ladder ``rho * self``."""
        return Ladder(self.base * rho, self.ratio, self.count)

    def refined(self) -> "Ladder":
        """Same range, ratio replaced by its square root (members nested)."""
        return Ladder(self.base, math.sqrt(self.ratio), 2 * self.count - 1)


Descriptor = Callable[..., np.ndarray]


def sample(descriptor: Descriptor, spec: GridSpec) -> GridFunction:
    """Evaluate a closed-form description at every grid point.

    ``descriptor`` receives the coordinate arrays (``x`` in 1-D, ``x1, x2``
    in 2-D) and returns values broadcastable to the grid shape.  No aliasing
    check is made.
    """
    try:
        with np.errstate(divide="raise", over="raise", invalid="raise", under="ignore"):
            vals = descriptor(*spec.coords())
        vals = np.broadcast_to(np.asarray(vals), spec.shape)
    except Exception as exc:  # noqa: BLE001 - any evaluation failure aborts
        raise ValueError(f"descriptor evaluation failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise ValueError("descriptor produced non-finite values")
    return GridFunction(spec, vals)


def _axis_cube_index(spec: GridSpec) -> np.ndarray:
    return np.floor(spec.axis()).astype(np.int64)


def cube_slices(spec: GridSpec) -> list[np.ndarray]:
    """Flat index blocks of the unit cubes ``Q_k``, lexicographic in ``k``.

    Requires an integral box side and at least one sample per unit.
    """
    if not float(spec.L).is_integer() or spec.m < 1:
        raise ValueError("cube partition needs integral L and m >= 1")
    k = _axis_cube_index(spec)
    k = k - k.min()
    per_axis = [np.flatnonzero(k == c) for c in range(int(k.max()) + 1)]
    if spec.d == 1:
        return per_axis
    n = spec.n
    return [(a[:, None] * n + b[None, :]).reshape(-1) for a in per_axis for b in per_axis]


def partial_derivative(u: GridFunction, axis: int) -> GridFunction:
    """Second-order central difference ``(u(x+h e) - u(x-h e)) / 2h`` with wraparound."""
    if not 0 <= axis < u.spec.d:
        raise ValueError(f"axis {axis} out of range for d={u.spec.d}")
    v = u.values
    out = (np.roll(v, -1, axis=axis) - np.roll(v, 1, axis=axis)) / (2 * u.spec.h)
    return GridFunction(u.spec, out)


def second_derivative(u: GridFunction, axis: int) -> GridFunction:
    """Three-point second difference along ``axis`` with wraparound."""
    if not 0 <= axis < u.spec.d:
        raise ValueError(f"axis {axis} out of range for d={u.spec.d}")
    v = u.values
    out = (np.roll(v, -1, axis=axis) - 2 * v + np.roll(v, 1, axis=axis)) / u.spec.h**2
    return GridFunction(u.spec, out)


def laplacian(u: GridFunction) -> GridFunction:
    out = second_derivative(u, 0).values
    for ax in range(1, u.spec.d):
        out = out + second_derivative(u, ax).values
    return GridFunction(u.spec, out)


def _resample_axis(v: np.ndarray, axis: int, factor: float) -> np.ndarray:
    n = v.shape[axis]
    c = n // 2
    i = np.arange(n)
    if factor >= 1:
        f = int(factor)
        src = c + np.floor_divide(i - c, f)
        take = np.take(v, np.clip(src, 0, n - 1), axis=axis)
        keep = (src >= 0) & (src < n)
        shape = [1] * v.ndim
        shape[axis] = n
        return take * keep.reshape(shape)
    f = int(round(1 / factor))
    out = np.zeros_like(v)
    shape = [1] * v.ndim
    shape[axis] = n
    for s in range(f):
        src = c + (i - c) * f + s
        keep = (src >= 0) & (src < n)
        out = out + np.take(v, np.clip(src, 0, n - 1), axis=axis) * keep.reshape(shape)
    return out / f


def resample_dyadic(u: GridFunction, factor: float) -> GridFunction:
    """``x -> u(x / factor)`` re-expressed on the same grid.

    ``factor = 2**k``.  Stretching (``k > 0``) replicates cells, shrinking
    (``k < 0``) averages groups of ``2**-k`` cells; content leaving the box is
    dropped and vacated cells are zero.  Cell-constant data on dyadic
    intervals (indicators) maps exactly.
    """
    if not is_power_of_two(factor):
        raise ValueError(f"resampling factor must be a power of two, got {factor}")
    if factor == 1:
        return u
    v = u.values
    for ax in range(u.spec.d):
        v = _resample_axis(v, ax, factor)
    return GridFunction(u.spec, v)


def stack_values(fs: Sequence[GridFunction]) -> np.ndarray:
    return np.stack([f.values for f in fs])
