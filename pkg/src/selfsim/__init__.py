"""Self-similar solutions of mean curvature flow in R^3.

Residual evaluation for arbitrary patches, coefficient identities for cyclic
and ruled surfaces, and shooting constructions of the surviving examples.
"""
from .geometry import (
    FormData,
    fit_lambda,
    fundamental_data,
    mean_curvature_and_support,
    shrinker_residual,
)
from .numerics import Dual2, ImmersionJet2, bracket_root, eval_jet2, fourier_extract, integrate_ivp
from .trig_poly import TrigPoly, coeff, is_zero, trig_mul

__version__ = "0.1.0"

__all__ = [
    "Dual2",
    "FormData",
    "ImmersionJet2",
    "TrigPoly",
    "bracket_root",
    "coeff",
    "eval_jet2",
    "fit_lambda",
    "fourier_extract",
    "fundamental_data",
    "integrate_ivp",
    "is_zero",
    "mean_curvature_and_support",
    "shrinker_residual",
    "trig_mul",
]
