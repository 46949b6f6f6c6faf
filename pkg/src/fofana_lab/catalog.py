"""Named closed-form test functions for the experiment suites.

Entries are grouped by dimension and carry flags:

``smooth``
    eligible for PDE and Cauchy-Riemann residual checks;
``indicator``
    piecewise constant, excluded from residual checks;
``heavy_tail``
    algebraic decay; the box truncates a visible amount of mass.

Except for indicators and heavy-tailed entries, every function decays below
``1e-8`` (relative) outside ``|x| <= L/4`` on the default grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import GridFunction, GridSpec, sample

__all__ = ["CatalogEntry", "catalog", "heat_bump", "DEFAULT_GRIDS"]

# (d, L, m) of the desk-scale default grids
DEFAULT_GRIDS = {1: (1, 64, 64), 2: (2, 16, 16)}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    d: int
    descriptor: Callable[..., np.ndarray]
    flags: frozenset[str]

    def sample(self, spec: GridSpec) -> GridFunction:
        if spec.d != self.d:
            raise ValueError(f"catalog entry {self.name!r} is {self.d}-dimensional, grid is {spec.d}-dimensional")
        return sample(self.descriptor, spec)

    @property
    def smooth(self) -> bool:
        return "smooth" in self.flags


def heat_bump(s: float, center=(0.0,)) -> Callable[..., np.ndarray]:
    """Descriptor of the heat kernel ``W_s`` centred at ``center``."""
    d = len(center)

    def f(*x):
        r2 = sum((xi - c) ** 2 for xi, c in zip(x, center))
        return np.exp(-r2 / (4 * s)) / (4 * math.pi * s) ** (d / 2)

    return f


def _poisson(d: int) -> Callable[..., np.ndarray]:
    c = math.gamma((d + 1) / 2) / math.pi ** ((d + 1) / 2)

    def f(*x):
        return c / (1 + sum(xi * xi for xi in x)) ** ((d + 1) / 2)

    return f


def _indicator(lo: float, hi: float, d: int) -> Callable[..., np.ndarray]:
    def f(*x):
        inside = np.ones(np.broadcast(*x).shape, dtype=bool)
        for xi in x:
            inside &= (xi >= lo) & (xi < hi)
        return inside.astype(float)

    return f


def _sum(*terms: tuple[float, Callable[..., np.ndarray]]) -> Callable[..., np.ndarray]:
    def f(*x):
        return sum(a * g(*x) for a, g in terms)

    return f


def _random_bumps(d: int, seed: int, count: int, s_range, c_range) -> Callable[..., np.ndarray]:
    rng = np.random.default_rng(seed)
    s = rng.uniform(*s_range, size=count)
    centers = rng.uniform(*c_range, size=(count, d))
    amps = rng.uniform(-1.0, 1.0, size=count)
    return _sum(*[(float(a), heat_bump(float(si), tuple(map(float, c)))) for a, si, c in zip(amps, s, centers)])


SMOOTH = frozenset({"smooth"})
INDICATOR = frozenset({"indicator"})
HEAVY = frozenset({"heavy_tail", "smooth"})


def _catalog_1d(seed: int) -> list[CatalogEntry]:
    return [
        CatalogEntry("heat_w1", 1, heat_bump(1.0), SMOOTH),
        CatalogEntry("heat_w2", 1, heat_bump(2.0), SMOOTH),
        CatalogEntry("heat_w1_shift", 1, heat_bump(1.0, (3.0,)), SMOOTH),
        CatalogEntry("dipole", 1, _sum((1.0, heat_bump(0.5, (-2.0,))), (-1.0, heat_bump(0.5, (2.0,)))), SMOOTH),
        CatalogEntry("multiscale", 1, _sum((1.0, heat_bump(0.5, (-3.0,))), (0.5, heat_bump(1.0, (4.0,)))), SMOOTH),
        CatalogEntry("gauss", 1, lambda x: np.exp(-math.pi * x * x), SMOOTH),
        CatalogEntry("random_bumps", 1, _random_bumps(1, seed, 6, (0.1, 0.5), (-6.0, 6.0)), SMOOTH),
        CatalogEntry("indicator_unit", 1, _indicator(0.0, 1.0, 1), INDICATOR),
        CatalogEntry("indicator_dyadic", 1, _indicator(-2.0, 2.0, 1), INDICATOR),
        CatalogEntry("poisson_p1", 1, _poisson(1), HEAVY),
    ]


def _catalog_2d(seed: int) -> list[CatalogEntry]:
    return [
        CatalogEntry("heat_w02", 2, heat_bump(0.2, (0.0, 0.0)), SMOOTH),
        CatalogEntry("heat_w01_shift", 2, heat_bump(0.1, (1.0, 0.5)), SMOOTH),
        CatalogEntry(
            "dipole",
            2,
            _sum((1.0, heat_bump(0.1, (-1.0, 0.0))), (-1.0, heat_bump(0.1, (1.0, 0.0)))),
            SMOOTH,
        ),
        CatalogEntry("gauss", 2, lambda x, y: np.exp(-math.pi * (x * x + y * y)), SMOOTH),
        CatalogEntry(
            "multiscale",
            2,
            _sum((1.0, heat_bump(0.05, (0.0, 0.0))), (0.5, heat_bump(0.2, (0.5, 0.0)))),
            SMOOTH,
        ),
        CatalogEntry("random_bumps", 2, _random_bumps(2, seed, 6, (0.05, 0.15), (-1.0, 1.0)), SMOOTH),
        CatalogEntry("indicator_unit", 2, _indicator(0.0, 1.0, 2), INDICATOR),
        CatalogEntry("indicator_dyadic", 2, _indicator(-1.0, 1.0, 2), INDICATOR),
        CatalogEntry("poisson_p1", 2, _poisson(2), HEAVY),
    ]


def catalog(d: int, seed: int = 0) -> dict[str, CatalogEntry]:
    """All entries for dimension ``d``; ``seed`` drives the randomized bump field."""
    if d == 1:
        entries = _catalog_1d(seed)
    elif d == 2:
        entries = _catalog_2d(seed)
    else:
        raise ValueError(f"dimension must be 1 or 2, got {d}")
    return {e.name: e for e in entries}
