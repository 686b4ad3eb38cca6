"""Numerical laboratory for extreme values of zeta and L-function families."""

__version__ = "0.1.0"

from . import analysis, ensembles, families, mathfn, montecarlo, zeta  # noqa: F401
