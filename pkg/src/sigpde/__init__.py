"""Signature kernels for piecewise-linear time series.

The kernel of two paths solves a hyperbolic PDE on the product of their time
grids; this package solves it by truncated power-series propagation
(:mod:`sigpde.polyapprox`), Chebyshev interpolation
(:mod:`sigpde.polyinterp`) and explicit finite differences
(:mod:`sigpde.finitediff`), benchmarked against an explicit
truncated-signature oracle (:mod:`sigpde.sigoracle`).  Batched Gram/MMD
utilities live in :mod:`sigpde.gram` and error-bound calculators in
:mod:`sigpde.analysis`.
"""

from . import analysis, finitediff, gram, polyapprox, polyinterp, sigoracle, specfun
from .gram import GramMatrix, SolverConfig
from .paths import (
    PiecewiseLinearPath,
    RectangleCoefficient,
    make_path,
    rect_coeff,
    refine_path,
    sample_brownian,
    sample_sincos_pair,
)

__all__ = [
    "analysis",
    "finitediff",
    "gram",
    "polyapprox",
    "polyinterp",
    "sigoracle",
    "specfun",
    "GramMatrix",
    "SolverConfig",
    "PiecewiseLinearPath",
    "RectangleCoefficient",
    "make_path",
    "rect_coeff",
    "refine_path",
    "sample_brownian",
    "sample_sincos_pair",
]

__version__ = "0.1.0"
