import math
import warnings

import numpy as np
import pytest

from fofana_lab.catalog import heat_bump
from fofana_lab.grid import GridFunction, Ladder, make_grid, sample
from fofana_lab.hardy_fofana import (
    CharacterizationReport,
    Ladders,
    characterize,
    dilation_characterization,
    hardy_fofana_norm,
    poisson_characterization_norm,
    restricted_at_infinity_diag,
    riesz_characterization,
)
from fofana_lab.kernels import KernelRangeWarning, mollifier
from fofana_lab.maximal import grand_maximal
from fofana_lab.norms import ExponentError, Exponents, amalgam_norm, fofana_norm, lp_norm
from fofana_lab.transforms import convolve, riesz_transform

E1 = Exponents(1, 2, 1.5)
R_SMALL = Ladder.dyadic(-3, 3)


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", KernelRangeWarning)
        yield


def ladders_for(spec):
    return Ladders(Ladders.default(spec).t, R_SMALL)


def smooth_entries(cat):
    return {k: v for k, v in cat.items() if v.smooth}


def test_zero_everywhere(grid1, grid2):
    for g in (grid1, grid2):
        z = GridFunction.zeros(g)
        rep = characterize(z, E1, ladders_for(g))
        assert all(v == 0 for v in rep.values().values())
        assert rep.ratios == {} and rep.consistent_support
        tab = restricted_at_infinity_diag(z, E1, Ladder.dyadic(0, 2))
        assert np.all(tab.norms == 0) and tab.violations == []


def test_constant_input(grid1):
    c = GridFunction.constant(grid1, -1.75)
    one = fofana_norm(GridFunction.constant(grid1, 1.0), E1).value
    assert hardy_fofana_norm(c, E1).value == pytest.approx(1.75 * one, rel=1e-10)


def test_exponent_checks_and_golden(grid1):
    f = sample(heat_bump(1 / (4 * math.pi)), grid1)
    with pytest.raises(ExponentError, match="p <= alpha <= q"):
        hardy_fofana_norm(f, Exponents(1, 1.5, 2))
    with pytest.raises(ExponentError):
        hardy_fofana_norm(f, Exponents(1, math.inf, 2))
    with pytest.raises(ExponentError):
        hardy_fofana_norm(GridFunction.zeros(make_grid(2, 8, 8)), Exponents(0.4, 1, 0.5))
    assert hardy_fofana_norm(f, E1).value == pytest.approx(0.8524213505680317, rel=1e-9)


def test_homogeneity(grid1, grid2, cat1, cat2):
    for g, cat in ((grid1, cat1), (grid2, cat2)):
        f = cat["dipole"].sample(g)
        lad = ladders_for(g)
        for fn in (hardy_fofana_norm, poisson_characterization_norm, riesz_characterization):
            assert fn(3 * f, E1, lad).value == pytest.approx(3 * fn(f, E1, lad).value, rel=1e-13)


def test_riesz_functional_l2_limit(grid1, cat1):
    e = Exponents(2, 2, 2)
    for name, ent in smooth_entries(cat1).items():
        f = ent.sample(grid1)
        rep = riesz_characterization(f, e)
        expected = lp_norm(f, 2) + lp_norm(riesz_transform(f, 0), 2)
        assert abs(rep.value / expected - 1) < 1e-2, name
        assert rep.argmax == rep.ladder.members[0]


def test_riesz_breakdown_on_even_input(grid1):
    f = sample(lambda x: np.exp(-x * x), grid1)
    rep = riesz_characterization(f, E1, ladders_for(grid1))
    assert set(rep.breakdown) == {"smooth", "riesz_0"}
    np.testing.assert_allclose(rep.breakdown["smooth"] + rep.breakdown["riesz_0"], rep.terms, rtol=1e-15)
    h = riesz_transform(f, 0).values
    assert np.abs(h + np.roll(h[::-1], 1)).max() < 1e-12


def test_riesz_breakdown_2d(grid2, cat2):
    rep = riesz_characterization(cat2["dipole"].sample(grid2), E1, ladders_for(grid2))
    assert set(rep.breakdown) == {"smooth", "riesz_0", "riesz_1"}


@pytest.mark.parametrize("d", [1, 2])
def test_dilation_matches_estimator(d, grid1, grid2, cat1, cat2):
    g, cat = (grid1, cat1) if d == 1 else (grid2, cat2)
    lad = ladders_for(g)
    for name, ent in cat.items():
        f = ent.sample(g)
        a = hardy_fofana_norm(f, E1, lad)
        b = dilation_characterization(f, E1, ladders=lad)
        np.testing.assert_allclose(b.terms, a.terms, rtol=1e-10, err_msg=name)


def test_dilation_single_scale_is_hardy_amalgam(grid1, cat1):
    f = cat1["multiscale"].sample(grid1)
    lad = Ladders.default(grid1)
    rep = dilation_characterization(f, E1, Ladder(1.0, 2.0, 1), lad)
    assert rep.value == amalgam_norm(grand_maximal(f, lad.t), E1.p, E1.q)
    with pytest.raises(ValueError):
        dilation_characterization(f, E1, Ladder(1.0, 3.0, 2), lad)


def test_restriction_table(grid1, cat1):
    f = cat1["random_bumps"].sample(grid1)
    tab = restricted_at_infinity_diag(f, E1, Ladder.dyadic(0, 3))
    g = convolve(f, mollifier(grid1, 1.0).values)
    assert tab.norms[0] == fofana_norm(g, E1).value
    assert np.all(tab.norms <= tab.bound * (1 + 1e-12))
    assert len(tab.rows()) == 4
    with pytest.raises(ValueError):
        restricted_at_infinity_diag(f, E1, Ladder(0.5, 2.0, 3))


@pytest.mark.parametrize("rho", [0.5, 2.0, 4.0])
@pytest.mark.parametrize("d", [1, 2])
def test_estimator_dilation_invariance(rho, d, grid1, grid2, cat1, cat2):
    from fofana_lab.norms import dilate

    g, cat = (grid1, cat1) if d == 1 else (grid2, cat2)
    lad = ladders_for(g)
    for name, ent in cat.items():
        f = ent.sample(g)
        a = hardy_fofana_norm(dilate(f, E1.alpha, rho), E1, lad.dilated(rho))
        b = hardy_fofana_norm(f, E1, lad)
        assert a.value == pytest.approx(b.value, rel=1e-10), name


@pytest.mark.parametrize("d,p", [(1, 1.0), (1, 0.6), (2, 0.75)])
def test_quasi_triangle(d, p, grid1, grid2, cat1, cat2):
    g, cat = (grid1, cat1) if d == 1 else (grid2, cat2)
    e = Exponents(p, 2.0, 1.5)
    lad = ladders_for(g)
    names = list(cat)
    for a, b in zip(names, names[1:]):
        f, k = cat[a].sample(g), cat[b].sample(g)
        lhs = hardy_fofana_norm(f + k, e, lad).value ** p
        rhs = hardy_fofana_norm(f, e, lad).value ** p + hardy_fofana_norm(k, e, lad).value ** p
        assert lhs <= rhs * (1 + 1e-12), (a, b)


@pytest.mark.parametrize("d", [1, 2])
def test_ratio_invariance_under_dilation(d, grid1, grid2, cat1, cat2):
    from fofana_lab.norms import dilate

    g, cat = (grid1, cat1) if d == 1 else (grid2, cat2)
    lad = ladders_for(g)
    for name in ("gauss", "dipole", "indicator_dyadic"):
        f = cat[name].sample(g)
        base = characterize(f, E1, lad)
        for rho in (0.5, 2.0):
            rep = characterize(dilate(f, E1.alpha, rho), E1, lad.dilated(rho), R_SMALL.scaled(1 / rho))
            for key, r in base.ratios.items():
                assert rep.ratios[key] == pytest.approx(r, rel=1e-2), (name, key)


def test_poisson_band_contains_heavy_tail(grid1, cat1):
    lad = ladders_for(grid1)
    ratios = {}
    for name, ent in cat1.items():
        f = ent.sample(grid1)
        ratios[name] = poisson_characterization_norm(f, E1, lad).value / hardy_fofana_norm(f, E1, lad).value
    band = [v for k, v in ratios.items() if k != "poisson_p1"]
    assert min(band) <= ratios["poisson_p1"] <= max(band)
    assert 0.5 < min(band) and max(band) < 2


@pytest.mark.parametrize("d", [1, 2])
def test_mollifier_independence(d, grid1, grid2, cat1, cat2):
    g, cat = (grid1, cat1) if d == 1 else (grid2, cat2)
    lad = ladders_for(g)
    ratios = []
    for ent in cat.values():
        f = ent.sample(g)
        ratios.append(hardy_fofana_norm(f, E1, lad, "gaussian").value / hardy_fofana_norm(f, E1, lad, "cos2").value)
    ratios = np.array(ratios)
    assert ratios.max() / ratios.min() - 1 < 0.05


def test_report_ratios_and_support():
    from fofana_lab.norms import NormReport

    lad = Ladder.dyadic(0, 0)
    mk = lambda v: NormReport.from_terms([v], lad)  # noqa: E731
    rep = CharacterizationReport(mk(2.0), mk(1.0), mk(4.0), mk(2.0))
    assert rep.ratios["maximal/poisson"] == 2.0 and rep.ratios["riesz/dilation"] == 2.0
    assert len(rep.ratios) == 6 and rep.consistent_support
    rep = CharacterizationReport(mk(2.0), mk(0.0), mk(4.0), mk(2.0))
    assert "maximal/poisson" not in rep.ratios and not rep.consistent_support
