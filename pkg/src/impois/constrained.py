"""Signal-plus-background inference with a known background mean.

The count is ``X = S + B`` with ``S ~ Pois(lam)`` and ``B ~ Pois(beta)``, so
``theta = lam + beta >= beta``.  Random-set mass that conflicts with this
constraint is moved onto the boundary point ``theta = beta``; away from the
boundary the unconstrained point plausibility is used unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

from .ordering import DEFAULT_EPSILON, build_ranking
from .two_sided import PlausibilityInterval, _check_inputs, level_set_hull, point_plausibility, search_bracket

__all__ = ["ConstraintSpec", "LambdaInterval", "conflict_mass", "ebsb_plausibility", "lambda_interval"]


@dataclass(frozen=True)
class ConstraintSpec:
    """Known background mean ``beta``; the signal rate is ``theta - beta``."""

    beta: float

    def __post_init__(self):
        if not self.beta >= 0 or not math.isfinite(self.beta):
            raise ValueError(f"background mean must be nonnegative and finite, got {self.beta!r}")

    def signal(self, theta: float) -> float:
        return theta - self.beta


@dataclass(frozen=True)
class LambdaInterval(PlausibilityInterval):
    """Plausibility interval on the signal scale ``lam = theta - beta``."""

    beta: float = 0.0
    conflict_mass: float = 0.0


def _check_beta(beta):
    if not beta >= 0 or not math.isfinite(beta):
        raise ValueError(f"beta must be nonnegative and finite, got {beta!r}")


def conflict_mass(x: int, beta: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Belief in ``[beta, inf)^c`` under the random set ranked at ``theta0 = beta``.

    The nested supports are unions of cells ``(G_{x'+1}(beta), G_{x'}(beta)]``
    taken in rank order.  The cells of counts above ``x`` lie in
    ``(0, G_{x+1}(beta)]`` and the rest lie above it, so the largest support
    avoiding ``(G_{x+1}(beta), 1]`` is the rank prefix that stops just short
    of the first-ranked count in ``{0, ..., x}``.
    """
    _check_inputs(x)
    _check_beta(beta)
    if beta == 0:
        return 0.0
    ranking = build_ranking(beta, epsilon)
    first = min(ranking.rank_of(k) for k in range(min(int(x), ranking.truncation_bound) + 1))
    return ranking.mass_before_rank(first)


def ebsb_plausibility(x: int, theta0: float, beta: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Plausibility of ``{theta0}`` under the constraint ``theta >= beta``."""
    _check_beta(beta)
    if theta0 < beta:
        return 0.0
    if theta0 == beta and conflict_mass(x, beta, epsilon) > 0:
        return 1.0
    return point_plausibility(x, theta0, epsilon)


def lambda_interval(x: int, beta: float, alpha: float, epsilon: float = DEFAULT_EPSILON) -> LambdaInterval:
    """Level-``alpha`` plausibility interval for the signal rate ``lam``.

    The level set of the constrained plausibility over ``theta >= beta`` is
    shifted down by ``beta``.
    """
    _check_inputs(x, alpha)
    _check_beta(beta)
    if beta == 0:
        raise ValueError("beta must be positive; use plausibility_interval without a background")
    x = int(x)
    hi = max(search_bracket(x)[1], beta + 10.0 * math.sqrt(beta + 1.0) + 10.0)
    lower, upper, contiguous = level_set_hull(
        partial(ebsb_plausibility, x, beta=beta, epsilon=epsilon),
        alpha,
        beta,
        hi,
        floor=beta,
        floor_value=beta,
        extra=(float(x),) if x > beta else (),
    )
    return LambdaInterval(
        x,
        alpha,
        max(0.0, lower - beta),
        upper - beta,
        contiguous,
        beta=beta,
        conflict_mass=conflict_mass(x, beta, epsilon),
    )
