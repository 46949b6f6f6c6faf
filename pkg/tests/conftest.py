import math

import numpy as np
import pytest

from fofana_lab.catalog import DEFAULT_GRIDS, catalog
from fofana_lab.grid import make_grid


@pytest.fixture(scope="session")
def grid1():
    return make_grid(*DEFAULT_GRIDS[1])


@pytest.fixture(scope="session")
def grid2():
    return make_grid(*DEFAULT_GRIDS[2])


@pytest.fixture(scope="session")
def small2():
    return make_grid(2, 8, 8)


@pytest.fixture(scope="session")
def cat1():
    return catalog(1, seed=0)


@pytest.fixture(scope="session")
def cat2():
    return catalog(2, seed=0)


def rel_l2(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def gaussian(x):
    return np.exp(-math.pi * x * x)
