"""Optimal inferential models for a Poisson mean."""

from .constrained import ConstraintSpec, LambdaInterval, conflict_mass, ebsb_plausibility, lambda_interval
from .dist import gamma_cdf, gamma_sf, poisson_cdf, poisson_pmf, poisson_sample
from .im_core import Assertion, AssertionKind, BeliefPair, fiducial_bound, one_sided
from .ordering import OrderingStopped, Ranking, build_ranking, diagnostics, psi_curve
from .two_sided import (
    PlausibilityCurve,
    PlausibilityInterval,
    plausibility_curve,
    plausibility_interval,
    point_plausibility,
    two_sided_belief,
)

__version__ = "0.1.0"

__all__ = [
    "Assertion",
    "AssertionKind",
    "BeliefPair",
    "ConstraintSpec",
    "LambdaInterval",
    "OrderingStopped",
    "PlausibilityCurve",
    "PlausibilityInterval",
    "Ranking",
    "build_ranking",
    "conflict_mass",
    "diagnostics",
    "ebsb_plausibility",
    "fiducial_bound",
    "gamma_cdf",
    "gamma_sf",
    "lambda_interval",
    "one_sided",
    "plausibility_curve",
    "plausibility_interval",
    "point_plausibility",
    "poisson_cdf",
    "poisson_pmf",
    "poisson_sample",
    "psi_curve",
    "two_sided_belief",
]
