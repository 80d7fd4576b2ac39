"""Desk-scale numerical laboratory for semigroup smoothness classes.

Finite reversible chains, truncated frequency lattices and deformed tori share
one facade (SemigroupModel) exposing heat/Poisson flows, their derivatives and
the norm zoo; on top of it live the gradient forms with their curvature scans,
the smoothness and oscillation seminorms, and the boundedness experiments.
"""

from . import campanato, gamma, holder, models, riesz_morrey, semigroup, spectral
from .semigroup import SemigroupModel

__version__ = "0.1.0"

__all__ = [
    "SemigroupModel",
    "campanato",
    "gamma",
    "holder",
    "models",
    "riesz_morrey",
    "semigroup",
    "spectral",
]
