import math
import warnings

import numpy as np
import pytest

from conftest import rel_l2
from fofana_lab.grid import make_grid
from fofana_lab.kernels import (
    KernelRangeWarning,
    heat_kernel,
    mollifier,
    periodic_riesz_kernel,
    poisson_kernel,
    riesz_constant,
    riesz_kernel_truncated,
)
from fofana_lab.transforms import convolve


def reflect(v):
    """Values at ``-x_j`` for grid values ``v`` at ``x_j`` (any dimension)."""
    for ax in range(v.ndim):
        v = np.roll(np.flip(v, axis=ax), 1, axis=ax)
    return v


@pytest.fixture(autouse=True)
def _quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", KernelRangeWarning)
        yield


def test_point_values():
    g1, g2 = make_grid(1, 16, 32), make_grid(2, 8, 8)
    assert abs(poisson_kernel(g1, 1.0, periodic=False).at(0.0) - 1 / math.pi) < 1e-15
    assert abs(poisson_kernel(g1, 2.0, periodic=False).at(0.0) - 1 / (2 * math.pi)) < 1e-15
    assert heat_kernel(g1, 1 / (4 * math.pi), periodic=False).at(0.0) == pytest.approx(1.0, abs=1e-15)
    assert heat_kernel(g2, 1.0, periodic=False).at(0.0, 0.0) == pytest.approx(1 / (4 * math.pi), abs=1e-15)
    assert riesz_kernel_truncated(g1, 0, 0.1).at(1.0) == pytest.approx(1 / math.pi, abs=1e-15)
    assert riesz_kernel_truncated(g2, 0, 0.25).at(1.0, 0.0) == pytest.approx(1 / (2 * math.pi), abs=1e-15)
    assert riesz_constant(1) == pytest.approx(1 / math.pi)
    assert riesz_constant(2) == pytest.approx(1 / (2 * math.pi))


def test_periodized_values_near_origin_match_closed_form():
    g = make_grid(1, 64, 16)
    p = poisson_kernel(g, 1.0)
    # the images add sum_{n != 0} P_1(nL) ~ 2 / (pi L^2) * pi^2/6
    assert abs(p.at(0.0) - 1 / math.pi) < 1e-3
    h = heat_kernel(g, 1.0)
    assert abs(h.at(0.0) - 1 / math.sqrt(4 * math.pi)) < 1e-15


def test_masses():
    g = make_grid(1, 64, 64)
    p = poisson_kernel(g, 1.0)
    assert abs(p.mass - 1) < 1e-2
    assert abs(p.mass - 1) < 1e-12
    free = poisson_kernel(g, 1.0, periodic=False)
    assert abs(free.mass + free.tail_mass - 1) < 1e-3
    assert free.tail_mass == pytest.approx(1 - 2 / math.pi * math.atan(32), rel=1e-6)
    for t in (4 * g.h**2, 0.01, 1.0, 8.0, (g.L / 8) ** 2):
        assert abs(heat_kernel(g, t).mass - 1) < 1e-8
    g2 = make_grid(2, 16, 16)
    # the 2-D Poisson kernel needs t >= 4h before its grid mass settles
    for t in (0.25, 0.5, 1.0, 2.0):
        assert abs(poisson_kernel(g2, t).mass - 1) < 1e-6
        assert abs(heat_kernel(g2, t * t).mass - 1) < 1e-8


@pytest.mark.parametrize("d", [1, 2])
def test_nonnegative_and_even(d):
    g = make_grid(d, 16, 8)
    for k in (poisson_kernel(g, 0.5), heat_kernel(g, 0.3), mollifier(g, 0.7), mollifier(g, 0.7, "cos2")):
        v = k.values.values
        assert v.min() >= 0
        np.testing.assert_allclose(reflect(v), v, rtol=0, atol=1e-14 * v.max())


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("periodic", [False, True])
def test_riesz_kernel_odd_and_truncated(d, periodic):
    g = make_grid(d, 16, 8)
    eps = 0.5
    for j in range(d):
        k = riesz_kernel_truncated(g, j, eps, periodic=periodic)
        v = k.values.values
        np.testing.assert_allclose(reflect(v), -v, rtol=1e-12, atol=1e-14)
        r = np.sqrt(sum(x * x for x in g.coords()))
        assert np.all(v[r <= eps] == 0)
        assert k.at(*([0.0] * d)) == 0


def test_riesz_errors():
    g = make_grid(2, 8, 8)
    with pytest.raises(ValueError):
        riesz_kernel_truncated(g, 2, 0.5)
    with pytest.raises(ValueError):
        riesz_kernel_truncated(g, 0, g.h)


def test_scale_errors():
    g = make_grid(1, 8, 8)
    for fn in (poisson_kernel, heat_kernel, mollifier):
        for t in (0.0, -1.0, math.inf):
            with pytest.raises(ValueError):
                fn(g, t)
    with pytest.raises(ValueError):
        mollifier(g, 1.0, "boxcar")


def test_range_warnings():
    g = make_grid(1, 8, 8)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        poisson_kernel(g, 1.0)
        heat_kernel(g, 0.001)
        heat_kernel(g, 4.0)
    assert sum(issubclass(w.category, KernelRangeWarning) for w in rec) == 3
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        heat_kernel(make_grid(1, 64, 16), 1.0)


def test_mollifier_normalization():
    g = make_grid(1, 64, 16)
    for kind in ("gaussian", "cos2"):
        for t in (0.125, 0.5, 1, 4, 8):
            assert abs(mollifier(g, t, kind).mass - 1) < 1e-14
    raw = np.exp(-math.pi * g.axis() ** 2)
    Z = g.h * raw.sum()
    assert mollifier(g, 1.0).at(0.0) == pytest.approx(1 / Z, rel=1e-14)


@pytest.mark.parametrize("t,s", [(0.25, 0.25), (0.25, 2.0), (1.0, 1.0), (2.0, 2.0)])
def test_poisson_semigroup(t, s):
    g = make_grid(1, 64, 16)
    lhs = convolve(poisson_kernel(g, t).values, poisson_kernel(g, s).values)
    assert rel_l2(lhs.values, poisson_kernel(g, t + s).values.values) < 1e-6


def test_poisson_semigroup_2d():
    g = make_grid(2, 16, 16)
    lhs = convolve(poisson_kernel(g, 0.25).values, poisson_kernel(g, 0.5).values)
    assert rel_l2(lhs.values, poisson_kernel(g, 0.75).values.values) < 1e-6


@pytest.mark.parametrize("d", [1, 2])
def test_heat_semigroup(d):
    g = make_grid(d, 16, 16)
    lo, hi = 4 * g.h**2, (g.L / 8) ** 2
    for t, s in [(lo, lo), (lo, hi), (0.1, 0.3), (hi, hi)]:
        lhs = convolve(heat_kernel(g, t).values, heat_kernel(g, s).values)
        assert rel_l2(lhs.values, heat_kernel(g, t + s).values.values) < 1e-8


@pytest.mark.parametrize("rho", [0.25, 0.5, 2.0, 4.0])
def test_dilation_covariance_is_exact(rho):
    for d in (1, 2):
        g = make_grid(d, 16, 8)
        gs = g.scaled(rho)
        c = rho ** (-d)
        pairs = [
            (poisson_kernel(gs, rho * 0.5), poisson_kernel(g, 0.5)),
            (poisson_kernel(gs, rho * 2.0), poisson_kernel(g, 2.0)),
            (mollifier(gs, rho * 0.75), mollifier(g, 0.75)),
            (mollifier(gs, rho * 4.0), mollifier(g, 4.0)),
            (heat_kernel(gs, rho * rho * 0.3), heat_kernel(g, 0.3)),
        ]
        for a, b in pairs:
            # bitwise apart from rounding inside the subnormal range
            np.testing.assert_allclose(a.values.values, c * b.values.values, rtol=0, atol=1e-300)


def test_periodic_riesz_matches_free_space_near_origin():
    g = make_grid(2, 32, 8)
    offs = g.offsets()
    r = np.sqrt(offs[0] ** 2 + offs[1] ** 2)
    near = (r > 0) & (r <= 2)
    for j in range(2):
        per = periodic_riesz_kernel(g, j)
        free = np.where(r > 0, offs[j] / (2 * math.pi * np.where(r > 0, r, 1) ** 3), 0)
        scale = np.abs(free[near]).max()
        assert np.abs(per - free)[near].max() < 1e-3 * scale


def test_periodic_riesz_1d_is_cotangent():
    g = make_grid(1, 8, 4)
    x = g.offsets()[0]
    k = periodic_riesz_kernel(g, 0)
    nz = (x != 0) & (np.abs(x) != 4)
    # the image sum of 1/(pi x) over the lattice converges (symmetrically) to cot(pi x / L) / L
    images = sum(1 / (math.pi * (x[nz] + n * g.L)) for n in range(-20000, 20001))
    np.testing.assert_allclose(k[nz], images, atol=1e-5)
