"""The Hardy-Fofana quasi-norm estimator and its equivalent characterizations.

Four functionals are computed for a grid function ``f``:

* grand maximal: ``||M f||_{p,q,alpha}``;
* Poisson: the Fofana norm of the non-tangential maximal function of ``f * P_t``;
* Riesz: ``sup_t ( ||f * phi_t|| + sum_j ||R_j f * phi_t|| )`` in the Fofana norm;
* dilation: ``sup_rho ||M(St^alpha_rho f)||_{p,q}``.

The equivalence constants between them are not known in closed form, so
they are reported as ratios rather than compared against fixed values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import GridFunction, GridSpec, Ladder
from .maximal import MollifierFamily, default_t_ladder, grand_maximal, mollifier_family, nontangential_maximal
from .norms import (
    DEFAULT_R_LADDER,
    Exponents,
    NormReport,
    amalgam_norm,
    dilate,
    fofana_norm,
    lp_norm,
)
from .transforms import convolve, poisson_extend, riesz_transform

__all__ = [
    "Ladders",
    "CharacterizationReport",
    "RestrictionTable",
    "hardy_fofana_norm",
    "poisson_characterization_norm",
    "riesz_characterization",
    "dilation_characterization",
    "restricted_at_infinity_diag",
    "characterize",
]


@dataclass(frozen=True)
class Ladders:
    """Scale ladders: ``t`` for convolution heights, ``r`` for the Fofana supremum."""

    t: Ladder
    r: Ladder = DEFAULT_R_LADDER

    @classmethod
    def default(cls, spec: GridSpec) -> "Ladders":
        return cls(default_t_ladder(spec), DEFAULT_R_LADDER)

    def dilated(self, rho: float) -> "Ladders":
        """Ladders matching data dilated by ``rho``: heights times ``rho``, radii over ``rho``."""
        return Ladders(self.t.scaled(rho), self.r.scaled(1.0 / rho))


def _ladders(f: GridFunction, ladders: Ladders | None) -> Ladders:
    return Ladders.default(f.spec) if ladders is None else ladders


def hardy_fofana_norm(
    f: GridFunction,
    e: Exponents,
    ladders: Ladders | None = None,
    moll: MollifierFamily | str | None = None,
) -> NormReport:
    """``||M f||_{p,q,alpha}`` with ``M`` the ladder grand maximal function."""
    e.theorem_mode(f.spec.d)
    lad = _ladders(f, ladders)
    return fofana_norm(grand_maximal(f, lad.t, moll), e, lad.r)


def poisson_characterization_norm(f: GridFunction, e: Exponents, ladders: Ladders | None = None) -> NormReport:
    """Fofana norm of ``x -> max_t max_{|x-y|<t} |f * P_t(y)|``."""
    e.theorem_mode(f.spec.d)
    lad = _ladders(f, ladders)
    return fofana_norm(nontangential_maximal(poisson_extend(f, lad.t)), e, lad.r)


def riesz_characterization(
    f: GridFunction,
    e: Exponents,
    ladders: Ladders | None = None,
    moll: MollifierFamily | str | None = None,
) -> NormReport:
    """``max_t ( ||f * phi_t|| + sum_j ||R_j f * phi_t|| )``, Fofana norms over ``ladders.r``.

    ``breakdown["smooth"]`` and ``breakdown["riesz_j"]`` hold the individual
    terms per height.
    """
    e.theorem_mode(f.spec.d)
    lad = _ladders(f, ladders)
    family = mollifier_family(moll)
    rj = [riesz_transform(f, j) for j in range(f.spec.d)]
    smooth, riesz = [], [[] for _ in rj]
    for t in lad.t:
        phi = family(f.spec, t).values
        smooth.append(fofana_norm(convolve(f, phi), e, lad.r).value)
        for j, g in enumerate(rj):
            riesz[j].append(fofana_norm(convolve(g, phi), e, lad.r).value)
    breakdown = {"smooth": np.array(smooth)}
    for j, vals in enumerate(riesz):
        breakdown[f"riesz_{j}"] = np.array(vals)
    total = breakdown["smooth"] + sum(breakdown[f"riesz_{j}"] for j in range(len(rj)))
    return NormReport.from_terms(total, lad.t, breakdown)


def dilation_characterization(
    f: GridFunction,
    e: Exponents,
    rho_ladder: Ladder | None = None,
    ladders: Ladders | None = None,
    moll: MollifierFamily | str | None = None,
    reindex_t: bool = True,
) -> NormReport:
    """``max_rho ||M(St^alpha_rho f)||_{p,q}`` over a dyadic ``rho`` ladder.

    ``St^alpha_rho f`` is formed exactly on the rescaled grid.  With
    ``reindex_t`` the heights of ``M`` are rescaled by ``rho`` as well, which
    makes the result coincide with :func:`hardy_fofana_norm` when
    ``rho_ladder`` equals the ``r`` ladder.
    """
    e.theorem_mode(f.spec.d)
    lad = _ladders(f, ladders)
    rhos = lad.r if rho_ladder is None else rho_ladder
    if not rhos.is_dyadic:
        raise ValueError("the rho ladder must consist of powers of two")
    terms = []
    for rho in rhos:
        g = dilate(f, e.alpha, rho)
        t = lad.t.scaled(rho) if reindex_t else lad.t
        terms.append(amalgam_norm(grand_maximal(g, t, moll), e.p, e.q))
    return NormReport.from_terms(terms, rhos)


@dataclass
class RestrictionTable:
    """Fofana norms of ``f * phi`` at the scaled exponents ``(p mu, q mu, alpha mu)``.

    ``bound[i] = ||f*phi||_inf^(1 - 1/mu) * ||f*phi||_{p,q,alpha}^(1/mu)``
    bounds ``norms[i]``; ``violations`` lists the ``mu`` where it fails.
    """

    mu: np.ndarray
    norms: np.ndarray
    bound: np.ndarray
    sup_norm: float
    violations: list[float] = field(default_factory=list)

    def rows(self):
        return list(zip(self.mu.tolist(), self.norms.tolist(), self.bound.tolist()))


def restricted_at_infinity_diag(
    f: GridFunction,
    e: Exponents,
    mu_ladder: Ladder,
    r_ladder: Ladder | None = None,
    moll: MollifierFamily | str | None = None,
    t: float = 1.0,
    rtol: float = 1e-12,
) -> RestrictionTable:
    """Tabulate ``mu -> ||f * phi_t||_{p mu, q mu, alpha mu}`` and check the interpolation bound."""
    if mu_ladder.members[0] < 1:
        raise ValueError("mu ladder members must be >= 1")
    g = convolve(f, mollifier_family(moll)(f.spec, t).values)
    sup = lp_norm(g, math.inf)
    base = fofana_norm(g, e, r_ladder).value
    mus = mu_ladder.members.copy()
    norms, bound, bad = [], [], []
    for mu in mus:
        val = base if mu == 1 else fofana_norm(g, e.scaled(mu), r_ladder).value
        b = sup ** (1 - 1 / mu) * base ** (1 / mu)
        norms.append(val)
        bound.append(b)
        if val > b * (1 + rtol):
            bad.append(float(mu))
    return RestrictionTable(mus, np.array(norms), np.array(bound), sup, bad)


@dataclass
class CharacterizationReport:
    """The four equivalent functionals for one function and exponent triple."""

    maximal_norm: NormReport
    poisson_norm: NormReport
    riesz_functional: NormReport
    dilation_norm: NormReport

    def values(self) -> dict[str, float]:
        return {
            "maximal": self.maximal_norm.value,
            "poisson": self.poisson_norm.value,
            "riesz": self.riesz_functional.value,
            "dilation": self.dilation_norm.value,
        }

    @property
    def ratios(self) -> dict[str, float]:
        """Pairwise ratios ``a/b``; omitted when ``b`` vanishes."""
        vals = self.values()
        names = list(vals)
        out = {}
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                if vals[b] > 0:
                    out[f"{a}/{b}"] = vals[a] / vals[b]
        return out

    @property
    def consistent_support(self) -> bool:
        """All four vanish together or are all positive."""
        pos = [v > 0 for v in self.values().values()]
        return all(pos) or not any(pos)


def characterize(
    f: GridFunction,
    e: Exponents,
    ladders: Ladders | None = None,
    rho_ladder: Ladder | None = None,
    moll: MollifierFamily | str | None = None,
) -> CharacterizationReport:
    lad = _ladders(f, ladders)
    return CharacterizationReport(
        hardy_fofana_norm(f, e, lad, moll),
        poisson_characterization_norm(f, e, lad),
        riesz_characterization(f, e, lad, moll),
        dilation_characterization(f, e, rho_ladder, lad, moll),
    )
