"""Grand, Hardy-Littlewood and non-tangential maximal functions on the torus.

Suprema over a continuous parameter are maxima over a :class:`Ladder`, so
every computed maximal function is a lower bound for the continuous one.
Balls and cones use the strict inequality ``|x - y| < r`` on grid points,
with distances measured on the torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _accel
from .grid import GridFunction, GridSpec, Ladder
from .kernels import KernelSample, mollifier
from .norms import Exponents, NormReport, fofana_norm
from .transforms import Slab, _fftn, _ifftn, _kernel_fft

__all__ = [
    "ConeSpec",
    "MollifierFamily",
    "mollifier_family",
    "default_t_ladder",
    "default_ball_ladder",
    "grand_maximal",
    "ball_average",
    "hl_maximal",
    "cone_max",
    "nontangential_maximal",
    "VectorMaximalReport",
    "vector_maximal_experiment",
]

MollifierFamily = Callable[[GridSpec, float], KernelSample]


@dataclass(frozen=True)
class ConeSpec:
    """The cone ``{(y, t) : |x - y| < t}`` sampled at the heights of ``t_ladder``."""

    t_ladder: Ladder
    aperture: float = 1.0

    def __post_init__(self):
        if self.aperture != 1.0:
            raise ValueError("only the aperture-one cone |x - y| < t is supported")


def default_t_ladder(spec: GridSpec) -> Ladder:
    """Dyadic scales from ``2h`` up to ``L/4``."""
    kmin = int(round(math.log2(spec.h))) + 1
    kmax = int(math.floor(math.log2(spec.L / 4)))
    return Ladder.dyadic(kmin, max(kmax, kmin))


def default_ball_ladder(spec: GridSpec) -> Ladder:
    """Dyadic radii from ``h`` up to ``L/2``."""
    kmin = int(round(math.log2(spec.h)))
    kmax = int(math.floor(math.log2(spec.L / 2)))
    return Ladder.dyadic(kmin, max(kmax, kmin))


def _as_2d(v: np.ndarray) -> np.ndarray:
    return v.reshape(1, -1) if v.ndim == 1 else v


def mollifier_family(moll: MollifierFamily | str | None) -> MollifierFamily:
    """Normalize a mollifier kind name (default ``"gaussian"``) or callable to a callable."""
    if moll is None or isinstance(moll, str):
        kind = moll or "gaussian"
        return lambda spec, t: mollifier(spec, t, kind)
    return moll


def grand_maximal(
    f: GridFunction,
    t_ladder: Ladder | None = None,
    moll: MollifierFamily | str | None = None,
) -> GridFunction:
    """``max_t |f * phi_t|`` over the ladder.

    ``moll`` is a mollifier kind (``"gaussian"`` or ``"cos2"``) or a callable
    ``(spec, t) -> KernelSample``.
    """
    ladder = default_t_ladder(f.spec) if t_ladder is None else t_ladder
    family = mollifier_family(moll)
    F = _fftn(f.values)
    out = None
    for t in ladder:
        k = family(f.spec, t).values
        g = f.spec.cell_volume * _ifftn(F * _kernel_fft(k))
        g = np.abs(g.real if f.is_real else g)
        out = g if out is None else np.maximum(out, g)
    return GridFunction(f.spec, out)


def ball_average(f: GridFunction, r: float) -> GridFunction:
    """Average of ``|f|`` over the grid ball ``|x - y| < r`` around every point."""
    spec = f.spec
    R2 = (r * spec.m) ** 2
    a = _as_2d(np.abs(f.values))
    count = _accel.ball_count(a.shape[0], a.shape[1], R2)
    if count == 0:
        raise ValueError(f"ball of radius {r} contains no grid point")
    sums = np.maximum(_accel.ball_sum(a, R2), 0.0)
    return GridFunction(spec, (sums / count).reshape(spec.shape))


def hl_maximal(f: GridFunction, r_ladder: Ladder | None = None) -> GridFunction:
    """Centered Hardy-Littlewood maximal function ``max_r avg_{B(x,r)} |f|``."""
    ladder = default_ball_ladder(f.spec) if r_ladder is None else r_ladder
    if ladder.members[0] < f.spec.h:
        raise ValueError("ball radii must be at least the grid step h")
    out = None
    for r in ladder:
        g = ball_average(f, r).values
        out = g if out is None else np.maximum(out, g)
    return GridFunction(f.spec, out)


def cone_max(values: np.ndarray, spec: GridSpec, t: float) -> np.ndarray:
    """``max_{|x-y|<t} values(y)`` for one slice (values already nonnegative)."""
    R2 = (t * spec.m) ** 2
    if R2 <= 0:
        raise ValueError("cone height must be positive")
    return _accel.ball_max(_as_2d(values), R2).reshape(spec.shape)


def nontangential_maximal(u: Slab) -> GridFunction:
    """``u*(x) = max_t max_{|x-y|<t} |u(y, t)|`` over the slab heights.

    A slice with ``t <= h`` contributes ``|u(x, t)|`` itself, since the
    only grid point in its cone is ``x``.
    """
    out = None
    for i, t in enumerate(u.times):
        g = cone_max(np.abs(u.values[i]), u.spec, float(t))
        out = g if out is None else np.maximum(out, g)
    return GridFunction(u.spec, out)


@dataclass
class VectorMaximalReport:
    """Both sides of the vector-valued maximal comparison and their ratio."""

    lhs: NormReport
    rhs: NormReport
    ratio: float
    tolerance: float = 1e-2

    @property
    def lower_bound_ok(self) -> bool:
        return self.ratio >= 1 - self.tolerance


def _lu_combine(arrays: Sequence[np.ndarray], u: float) -> np.ndarray:
    s = sum(np.abs(a) ** u for a in arrays)
    return s ** (1.0 / u)


def vector_maximal_experiment(
    fs: Sequence[GridFunction],
    u: float,
    e: Exponents,
    r_ladder: Ladder | None = None,
    ball_ladder: Ladder | None = None,
) -> VectorMaximalReport:
    """Compare ``||(sum M(f_n)^u)^(1/u)||`` with ``||(sum |f_n|^u)^(1/u)||`` in the Fofana norm.

    ``M`` is :func:`hl_maximal`; ``r_ladder`` drives the Fofana supremum and
    ``ball_ladder`` the maximal function.  The ratio is 1 when both sides
    vanish.
    """
    if not e.p > 1:
        raise ValueError(f"the vector-valued maximal inequality needs p > 1, got p = {e.p}")
    if not u > 1:
        raise ValueError(f"the inner exponent u must exceed 1, got {u}")
    if not fs:
        raise ValueError("empty function family")
    spec = fs[0].spec
    maxed = [hl_maximal(f, ball_ladder).values for f in fs]
    lhs = fofana_norm(GridFunction(spec, _lu_combine(maxed, u)), e, r_ladder)
    rhs = fofana_norm(GridFunction(spec, _lu_combine([f.values for f in fs], u)), e, r_ladder)
    if rhs.value == 0:
        ratio = 1.0 if lhs.value == 0 else math.inf
    else:
        ratio = lhs.value / rhs.value
    return VectorMaximalReport(lhs, rhs, ratio)
