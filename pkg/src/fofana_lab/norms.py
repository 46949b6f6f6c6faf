"""Lebesgue, amalgam, Fofana and Morrey norms, and the dilation ``St^alpha_r``.

Amalgam norms are exact block reductions over the unit-cube partition.  The
dilated norm ``||St^alpha_r u||_{p,q}`` is evaluated without resampling: the
change of variables turns it into an amalgam reduction of ``u`` over cubes of
side ``1/r``, which for dyadic ``r`` are unions of grid cells (or, below the
grid scale, equal sub-cells of one cell).  The function is taken to vanish
outside the box for these reductions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np

from .grid import GridFunction, GridSpec, Ladder, is_power_of_two, resample_dyadic

__all__ = [
    "Exponents",
    "ExponentError",
    "NormReport",
    "DEFAULT_R_LADDER",
    "lp_norm",
    "amalgam_norm",
    "dilated_amalgam_norm",
    "dilate",
    "fofana_norm",
    "morrey_norm",
]

DEFAULT_R_LADDER = Ladder.dyadic(-6, 6)


class ExponentError(ValueError):
    """Raised for exponent triples outside the admissible range."""


@dataclass(frozen=True)
class Exponents:
    """The triple ``(p, q, alpha)``; Fofana spaces are non-trivial only for ``p <= alpha <= q``."""

    p: float
    q: float
    alpha: float

    def __post_init__(self):
        p, q, a = self.p, self.q, self.alpha
        if not (p > 0 and a > 0 and q > 0):
            raise ExponentError(f"exponents must be positive, got (p, q, alpha) = ({p}, {q}, {a})")
        if math.isinf(p) or math.isinf(a):
            raise ExponentError("p and alpha must be finite")
        if not p <= a <= q:
            raise ExponentError(
                f"(p, q, alpha) = ({p}, {q}, {a}) violates p <= alpha <= q; "
                "the space (L^p, l^q)^alpha is trivial outside this range"
            )

    def theorem_mode(self, d: int) -> "Exponents":
        """Check ``(d-1)/d < p`` and ``q < inf``; returns self for chaining."""
        if not (d - 1) / d < self.p:
            raise ExponentError(f"need p > (d-1)/d = {(d - 1) / d}, got p = {self.p}")
        if math.isinf(self.q):
            raise ExponentError("q must be finite here")
        return self

    def scaled(self, mu: float) -> "Exponents":
        """``(p*mu, q*mu, alpha*mu)``."""
        return Exponents(self.p * mu, self.q * mu, self.alpha * mu)

    def astuple(self) -> tuple[float, float, float]:
        return (self.p, self.q, self.alpha)


@dataclass
class NormReport:
    """A discrete supremum over a ladder, with the member that attained it.

    ``terms[i]`` is the functional at ``ladder.members[i]``; ties in the
    maximum go to the smallest member.
    """

    value: float
    argmax: Any
    ladder: Ladder | None
    terms: np.ndarray
    breakdown: dict[str, np.ndarray] | None = field(default=None)

    @classmethod
    def from_terms(cls, terms, ladder: Ladder | None, breakdown=None) -> "NormReport":
        terms = np.asarray(terms, dtype=float)
        i = int(np.argmax(terms))
        arg = float(ladder.members[i]) if ladder is not None else i
        return cls(float(terms[i]), arg, ladder, terms, breakdown)

    def __float__(self) -> float:
        return self.value


def lp_norm(u: GridFunction, p: float) -> float:
    """``(h^d sum |u|^p)^(1/p)``; ``p = inf`` gives ``max |u|``."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    a = np.abs(u.values)
    if math.isinf(p):
        return float(a.max())
    return float((u.spec.cell_volume * np.sum(a**p)) ** (1.0 / p))


@lru_cache(maxsize=512)
def _cube_index(spec: GridSpec, side: float) -> tuple[np.ndarray, int]:
    # cube k along an axis holds the cells with floor(x / side) == k
    k = np.floor(spec.axis() / side).astype(np.int64)
    k -= k.min()
    nk = int(k.max()) + 1
    if spec.d == 1:
        idx = k
    else:
        idx = (k[:, None] * nk + k[None, :]).reshape(-1)
    idx.setflags(write=False)
    return idx, nk**spec.d


def _cube_power_sums(a_p: np.ndarray, spec: GridSpec, side: float) -> np.ndarray:
    idx, ncubes = _cube_index(spec, side)
    return np.bincount(idx, weights=a_p.reshape(-1), minlength=ncubes) * spec.cell_volume


def _lq_combine(local: np.ndarray, q: float, scale: float = 1.0) -> float:
    # local holds per-cube L^p norms
    if math.isinf(q):
        return float(local.max()) if local.size else 0.0
    return float((scale * np.sum(local**q)) ** (1.0 / q))


def _check_pq(p: float, q: float) -> None:
    if not (p > 0 and not math.isinf(p)):
        raise ValueError(f"p must be a positive finite number, got {p}")
    if not q > 0:
        raise ValueError(f"q must be positive or inf, got {q}")


def amalgam_norm(u: GridFunction, p: float, q: float) -> float:
    """``(sum_k ||u chi_{Q_k}||_p^q)^(1/q)`` over the unit cubes; ``q = inf`` takes the max."""
    _check_pq(p, q)
    return dilated_amalgam_norm(u, p, q, alpha=1.0, r=1.0)


def dilated_amalgam_norm(u: GridFunction, p: float, q: float, alpha: float, r: float) -> float:
    """``||St^alpha_r u||_{p,q}`` for dyadic ``r``, computed without resampling.

    With ``s = 1/r`` the cube ``Q_k`` pulls back to ``s*Q_k``, and
    ``||St^alpha_r u chi_{Q_k}||_p^p = r^(d - d p / alpha) int_{s Q_k} |u|^p``.
    """
    _check_pq(p, q)
    if not is_power_of_two(r):
        raise ValueError(f"dilation factor must be a power of two, got {r}")
    spec = u.spec
    d = spec.d
    a = np.abs(u.values)
    side = 1.0 / r
    if side >= spec.h:
        sums = _cube_power_sums(a**p, spec, side)
        local = (r ** (d - d * p / alpha) * sums) ** (1.0 / p)
        return _lq_combine(local, q)
    # cubes finer than a cell: (h*r)^d equal sub-cubes per cell
    local = r ** (-d / alpha) * a.reshape(-1)
    return _lq_combine(local, q, scale=(spec.h * r) ** d)


def dilate(u: GridFunction, alpha: float, r: float, mode: str = "rescale") -> GridFunction:
    """``(St^alpha_r u)(x) = r^(-d/alpha) u(x/r)`` for dyadic ``r``.

    ``mode="rescale"`` (default) is exact: the result lives on the grid with
    coordinates multiplied by ``r``.  ``mode="resample"`` keeps the grid and
    goes through :func:`~fofana_lab.grid.resample_dyadic`.
    """
    if not is_power_of_two(r):
        raise ValueError(f"dilation factor must be a power of two, got {r}")
    if r == 1:
        return u
    c = r ** (-u.spec.d / alpha)
    if mode == "rescale":
        return GridFunction(u.spec.scaled(r), c * u.values)
    if mode == "resample":
        return c * resample_dyadic(u, r)
    raise ValueError(f"unknown dilation mode {mode!r}")


def fofana_norm(u: GridFunction, e: Exponents, r_ladder: Ladder | None = None) -> NormReport:
    """``sup_r ||St^alpha_r u||_{p,q}`` over a dyadic ladder of ``r``."""
    ladder = DEFAULT_R_LADDER if r_ladder is None else r_ladder
    if not ladder.is_dyadic:
        raise ValueError("the r ladder must consist of powers of two")
    terms = [dilated_amalgam_norm(u, e.p, e.q, e.alpha, r) for r in ladder]
    return NormReport.from_terms(terms, ladder)


def morrey_norm(u: GridFunction, p: float, alpha: float, r_ladder: Ladder | None = None) -> float:
    """The ``q = inf`` Fofana norm, i.e. the Morrey norm, for ``p < alpha``."""
    if not p < alpha:
        raise ExponentError(f"Morrey norm needs p < alpha, got p={p}, alpha={alpha}")
    return fofana_norm(u, Exponents(p, math.inf, alpha), r_ladder).value
