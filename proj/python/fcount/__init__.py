"""Counting processes of order k.

Poisson and Polya-Aeppli processes of order k in homogeneous,
non-homogeneous, fractional and fractional non-homogeneous variants:
exact marginal distributions, seeded samplers, analytic moments and
covariances, long-range-dependence diagnostics, and solvers / residual
checkers for the fractional governing equations.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
