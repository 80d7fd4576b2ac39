"""Boundedness experiments: gradient transforms, dimension laws, multipliers."""

from .morrey import (
    cogrowth_estimate,
    heat_norm_1_inf,
    morrey_ratio,
    morrey_reverse_check,
    poisson_norm_2_inf,
    poisson_norm_p_inf,
    sqrt_generator_apply,
    ultracontractivity_fit,
)
from .multipliers import (
    analytic_multiplier_apply,
    analytic_multiplier_holder_ratio,
    discrete_sobolev_norm,
    eta,
    imaginary_power_profile,
    laplace_profile_value,
    marcinkiewicz_bound_and_ratio,
    truncation_profile,
)
from .riesz import (
    domgamma_ratio,
    gradient_side_seminorm,
    riesz_equivalence,
    riesz_holder_ratio,
    riesz_transform,
)
from .sweeps import ExponentFit, RatioSweep, fit_exponent, ratio_sweep

__all__ = [
    "ExponentFit",
    "RatioSweep",
    "analytic_multiplier_apply",
    "analytic_multiplier_holder_ratio",
    "cogrowth_estimate",
    "discrete_sobolev_norm",
    "domgamma_ratio",
    "eta",
    "fit_exponent",
    "gradient_side_seminorm",
    "heat_norm_1_inf",
    "imaginary_power_profile",
    "laplace_profile_value",
    "marcinkiewicz_bound_and_ratio",
    "morrey_ratio",
    "morrey_reverse_check",
    "poisson_norm_2_inf",
    "poisson_norm_p_inf",
    "ratio_sweep",
    "riesz_equivalence",
    "riesz_holder_ratio",
    "riesz_transform",
    "sqrt_generator_apply",
    "truncation_profile",
    "ultracontractivity_fit",
]
