"""Discrete experiments for Hardy-Fofana spaces on periodic grids.

The package samples functions on the torus ``[-L/2, L/2)^d``, evaluates
amalgam and Fofana norms, maximal functions, Riesz transforms and
Cauchy-Riemann systems, and runs reproducible experiment suites through the
``fofana-lab`` command.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

from .grid import GridFunction, GridSpec, Ladder, make_grid, sample
from .norms import ExponentError, Exponents, NormReport, amalgam_norm, dilate, fofana_norm, lp_norm, morrey_norm
from .kernels import heat_kernel, mollifier, poisson_kernel
from .transforms import Slab, convolve, heat_extend, poisson_extend, riesz_pv_oracle, riesz_transform
from .maximal import grand_maximal, hl_maximal, nontangential_maximal, vector_maximal_experiment
from .hardy_fofana import Ladders, characterize, dilation_characterization, hardy_fofana_norm
from .cauchy_riemann import CRSystem, caloric_map, caloric_norm, harmonic_system, half_time_derivative

__all__ = [
    "__version__",
    "GridFunction",
    "GridSpec",
    "Ladder",
    "make_grid",
    "sample",
    "ExponentError",
    "Exponents",
    "NormReport",
    "amalgam_norm",
    "dilate",
    "fofana_norm",
    "lp_norm",
    "morrey_norm",
    "heat_kernel",
    "mollifier",
    "poisson_kernel",
    "Slab",
    "convolve",
    "heat_extend",
    "poisson_extend",
    "riesz_pv_oracle",
    "riesz_transform",
    "grand_maximal",
    "hl_maximal",
    "nontangential_maximal",
    "vector_maximal_experiment",
    "Ladders",
    "characterize",
    "dilation_characterization",
    "hardy_fofana_norm",
    "CRSystem",
    "caloric_map",
    "caloric_norm",
    "harmonic_system",
    "half_time_derivative",
]
