import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fofana_lab.grid import (
    GridFunction,
    GridSpec,
    Ladder,
    cube_slices,
    is_power_of_two,
    laplacian,
    make_grid,
    partial_derivative,
    resample_dyadic,
    sample,
)


def test_make_grid_counts():
    g = make_grid(1, 16, 64)
    assert g.size == 1024 and g.n_cubes == 16
    g2 = make_grid(2, 8, 16)
    assert g2.size == 16384 and g2.n_cubes == 64
    assert g.h * g.m == 1.0


@pytest.mark.parametrize("args", [(1, 7, 64), (1, 16, 48), (3, 16, 64), (1, 0, 64), (1, 16, 1)])
def test_make_grid_rejects(args):
    with pytest.raises(ValueError):
        make_grid(*args)


def test_is_power_of_two():
    assert all(is_power_of_two(x) for x in (1, 2, 0.25, 2.0**-30, 1024))
    assert not any(is_power_of_two(x) for x in (0, -2, 3, 0.3, math.inf))


def test_scaled_spec_keeps_sample_count():
    g = make_grid(1, 16, 64)
    s = g.scaled(4)
    assert (s.L, s.m, s.n) == (64.0, 16.0, g.n)
    np.testing.assert_array_equal(s.axis(), 4 * g.axis())
    with pytest.raises(ValueError):
        g.scaled(3)


def test_sample_examples():
    g = make_grid(1, 16, 64)
    ind = sample(lambda x: ((x >= 0) & (x < 1)).astype(float), g)
    assert ind.values.sum() == 64
    assert np.all(sample(lambda x: 0 * x, g).values == 0)
    assert sample(lambda x: np.exp(-np.pi * x * x), g).at(0.0) == 1.0


def test_sample_failures():
    g = make_grid(1, 4, 2)
    with pytest.raises(ValueError):
        sample(lambda x: 1 / x, g)
    with pytest.raises(ValueError):
        sample(lambda x: np.log(x), g)


def test_grid_function_is_immutable():
    g = make_grid(1, 4, 2)
    u = GridFunction(g, np.arange(8.0))
    with pytest.raises(ValueError):
        u.values[0] = 3.0
    with pytest.raises(ValueError):
        GridFunction(g, np.array([np.nan] * 8))
    with pytest.raises(ValueError):
        GridFunction(g, np.zeros(7))
    with pytest.raises(ValueError):
        u + GridFunction(make_grid(1, 4, 4), np.zeros(16))


def test_grid_function_arithmetic():
    g = make_grid(1, 4, 2)
    u = GridFunction(g, np.arange(8.0))
    np.testing.assert_array_equal((2 * u - u).values, u.values)
    np.testing.assert_array_equal((-u).abs().values, u.values)
    assert u.is_real and not GridFunction(g, u.values * 1j).is_real


def test_cube_slices_examples():
    blocks = cube_slices(make_grid(1, 4, 2))
    assert [b.tolist() for b in blocks] == [[0, 1], [2, 3], [4, 5], [6, 7]]
    blocks2 = cube_slices(make_grid(2, 2, 2))
    assert len(blocks2) == 4 and all(len(b) == 4 for b in blocks2)


@pytest.mark.parametrize("d,L,m", [(1, 4, 2), (1, 16, 8), (2, 2, 2), (2, 4, 4)])
def test_cube_partition(d, L, m):
    spec = make_grid(d, L, m)
    blocks = cube_slices(spec)
    assert len(blocks) == L**d
    allidx = np.concatenate(blocks)
    assert len(allidx) == spec.size
    assert set(allidx.tolist()) == set(range(spec.size))
    assert all(len(b) == m**d for b in blocks)


def test_ladder_members():
    lad = Ladder.dyadic(-2, 2)
    np.testing.assert_array_equal(lad.members, [0.25, 0.5, 1, 2, 4])
    assert lad.is_dyadic and 1.0 in lad and 3.0 not in lad
    assert len(Ladder(1, 1.5, 4)) == 4
    assert not Ladder(1, 1.5, 4).is_dyadic
    ref = Ladder(0.1, 4.0, 5).refined()
    np.testing.assert_allclose(ref.members[::2], Ladder(0.1, 4.0, 5).members, rtol=1e-14)
    sp = Ladder.spanning(0.02, 60, 1.05)
    assert sp.top >= 60 and sp.members[-2] < 60
    for bad in [(0, 2, 3), (1, 1, 3), (1, 2, 0)]:
        with pytest.raises(ValueError):
            Ladder(*bad)


def test_derivative_of_sine_accuracy():
    g = make_grid(1, 16, 64)
    L = g.L
    u = sample(lambda x: np.sin(2 * np.pi * x / L) * L / (2 * np.pi), g)
    err = np.max(np.abs(partial_derivative(u, 0).values - np.cos(2 * np.pi * g.axis() / L)))
    assert err <= (2 * np.pi / L) ** 2 * g.h**2 / 6


def test_derivative_convergence_order():
    errs = []
    for m in (16, 32):
        g = make_grid(1, 8, m)
        u = sample(lambda x: np.sin(2 * np.pi * x / 8 * 3), g)
        ex = 2 * np.pi * 3 / 8 * np.cos(2 * np.pi * g.axis() / 8 * 3)
        errs.append(np.max(np.abs(partial_derivative(u, 0).values - ex)))
    order = math.log2(errs[0] / errs[1])
    assert 1.8 <= order <= 2.2


def test_derivative_of_constant_and_linear():
    g = make_grid(2, 4, 4)
    c = GridFunction.constant(g, 3.7)
    assert np.all(partial_derivative(c, 1).values == 0)
    assert np.all(laplacian(c).values == 0)
    lin = sample(lambda x: 2.5 * x, make_grid(1, 4, 4))
    d = partial_derivative(lin, 0).values
    np.testing.assert_allclose(d[1:-1], 2.5, rtol=1e-13)
    with pytest.raises(ValueError):
        partial_derivative(lin, 1)


def test_resample_indicator_exact():
    g = make_grid(1, 16, 8)
    ind = sample(lambda x: ((x >= 0) & (x < 1)).astype(float), g)
    out = resample_dyadic(ind, 2)
    ref = sample(lambda x: ((x >= 0) & (x < 2)).astype(float), g)
    np.testing.assert_array_equal(out.values, ref.values)
    assert resample_dyadic(ind, 1) is ind
    with pytest.raises(ValueError):
        resample_dyadic(ind, 3)


def test_resample_roundtrip_gaussian():
    g = make_grid(1, 16, 32)
    u = sample(lambda x: np.exp(-np.pi * x * x), g)
    back = resample_dyadic(resample_dyadic(u, 2), 0.5)
    sup_deriv = math.sqrt(2 * math.pi) * math.exp(-0.5)
    assert np.max(np.abs(back.values - u.values)) <= sup_deriv * g.h


@settings(max_examples=25, deadline=None)
@given(k=st.integers(-3, 3), c=st.floats(-4, 4, allow_nan=False))
def test_resample_dyadic_commutes_with_scalars(k, c):
    g = make_grid(1, 8, 8)
    u = sample(lambda x: np.exp(-x * x), g)
    a = resample_dyadic(c * u, 2.0**k).values
    b = c * resample_dyadic(u, 2.0**k).values
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-300)


def test_bare_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1, 3.0, 1.0)
    with pytest.raises(ValueError):
        GridSpec(1, 4.0, 3.0)
