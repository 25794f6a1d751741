"""Shrinkers permitted by the classification, their construction by shooting, and flow checks."""
from .curves import PLANAR, PROFILE, SampledCurve, ShootResult, hausdorff, spectral_derivatives
from .flow import FlowResult, circle, csf_evolve, self_similarity_check, square, stable_dt
from .shrinkers import (
    ANGENENT_BRACKET,
    abresch_langer_scan,
    abresch_langer_shoot,
    abresch_langer_solve,
    angenent_profile_shoot,
    canonical_shrinker,
    closure_ratio,
    planar_ode_residual,
    profile_ode_residual,
    revolve_profile,
)

__all__ = [
    "ANGENENT_BRACKET",
    "FlowResult",
    "PLANAR",
    "PROFILE",
    "SampledCurve",
    "ShootResult",
    "abresch_langer_scan",
    "abresch_langer_shoot",
    "abresch_langer_solve",
    "angenent_profile_shoot",
    "canonical_shrinker",
    "circle",
    "closure_ratio",
    "csf_evolve",
    "hausdorff",
    "planar_ode_residual",
    "profile_ode_residual",
    "revolve_profile",
    "self_similarity_check",
    "spectral_derivatives",
    "square",
    "stable_dt",
]
