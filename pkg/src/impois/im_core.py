"""Assertions, belief/plausibility pairs, and the optimal one-sided IM.

The predictive random set is never built as a set-valued object.  Every output
reduces to Poisson and gamma distribution function arithmetic on the
association ``G_{x+1}(theta) < u <= G_x(theta)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .dist import gamma_cdf, poisson_cdf, poisson_pmf

__all__ = [
    "AssertionKind",
    "Assertion",
    "BeliefPair",
    "CandidateSet",
    "one_sided",
    "fiducial_bound",
]

# slack for rounding in 0 <= bel <= pl <= 1
_PROB_SLACK = 1e-12


class AssertionKind(str, enum.Enum):
    GREATER = "greater"  # (theta0, inf)
    LESS_EQUAL = "less-equal"  # (0, theta0]
    POINT = "point"  # {theta0}
    POINT_COMPLEMENT = "point-complement"  # {theta0}^c


_COMPLEMENTS = {
    AssertionKind.GREATER: AssertionKind.LESS_EQUAL,
    AssertionKind.LESS_EQUAL: AssertionKind.GREATER,
    AssertionKind.POINT: AssertionKind.POINT_COMPLEMENT,
    AssertionKind.POINT_COMPLEMENT: AssertionKind.POINT,
}


@dataclass(frozen=True)
class Assertion:
    """A hypothesis about the Poisson mean, anchored at ``theta0``."""

    kind: AssertionKind
    theta0: float

    def __post_init__(self):
        object.__setattr__(self, "kind", AssertionKind(self.kind))
        if not self.theta0 > 0 or not math.isfinite(self.theta0):
            raise ValueError(f"theta0 must be positive and finite, got {self.theta0!r}")

    @property
    def one_sided(self) -> bool:
        return self.kind in (AssertionKind.GREATER, AssertionKind.LESS_EQUAL)

    def complement(self) -> "Assertion":
        return Assertion(_COMPLEMENTS[self.kind], self.theta0)

    def contains(self, theta: float) -> bool:
        if self.kind is AssertionKind.GREATER:
            return theta > self.theta0
        if self.kind is AssertionKind.LESS_EQUAL:
            return 0 < theta <= self.theta0
        if self.kind is AssertionKind.POINT:
            return theta == self.theta0
        return theta != self.theta0


@dataclass(frozen=True)
class BeliefPair:
    belief: float
    plausibility: float

    def __post_init__(self):
        b, p = self.belief, self.plausibility
        if not (-_PROB_SLACK <= b <= p + _PROB_SLACK and p <= 1 + _PROB_SLACK):
            raise ValueError(f"need 0 <= belief <= plausibility <= 1, got ({b}, {p})")


def _shape_cdf(a: int, theta: float) -> float:
    # G_0 is the point mass at zero
    return 1.0 if a == 0 else gamma_cdf(a, theta)


@dataclass(frozen=True)
class CandidateSet:
    """The half-open interval ``[G_x^{-1}(u), G_{x+1}^{-1}(u))`` of means
    compatible with count ``x`` and auxiliary draw ``u``.

    Only ``(x, u)`` is stored; membership is decided on the ``u`` scale.
    """

    x: int
    u: float

    def __post_init__(self):
        if self.x < 0:
            raise ValueError("x must be a nonnegative integer")
        if not 0 < self.u < 1:
            raise ValueError("u must lie in (0, 1)")

    def contains(self, theta: float) -> bool:
        if theta < 0:
            return False
        return _shape_cdf(self.x + 1, theta) < self.u <= _shape_cdf(self.x, theta)


def _check_count(x):
    if x < 0 or int(x) != x:
        raise ValueError(f"x must be a nonnegative integer, got {x!r}")


def one_sided(x: int, assertion: Assertion) -> BeliefPair:
    """Optimal belief and plausibility for a one-sided assertion.

    For ``A = (theta0, inf)`` the pair is ``(F(x-1), F(x))``; for
    ``(0, theta0]`` it is ``(1 - F(x), 1 - F(x-1))``, with ``F`` the
    Poisson distribution function at ``theta0``.
    """
    _check_count(x)
    if not assertion.one_sided:
        raise ValueError(f"one_sided needs a one-sided assertion, got {assertion.kind.value}")
    lo = poisson_cdf(x - 1, assertion.theta0)
    hi = poisson_cdf(x, assertion.theta0)
    if assertion.kind is AssertionKind.GREATER:
        return BeliefPair(lo, hi)
    return BeliefPair(1.0 - hi, 1.0 - lo)


def fiducial_bound(x: int, assertion: Assertion) -> float:
    """Probability of ``{u : Theta_x(u) is a subset of A}``.

    This is the fiducial (Dempster-Shafer) probability of ``A`` and an upper
    bound on the belief assigned by any admissible predictive random set.
    """
    _check_count(x)
    theta0 = assertion.theta0
    kind = assertion.kind
    if kind is AssertionKind.GREATER:
        return poisson_cdf(x - 1, theta0)
    if kind is AssertionKind.LESS_EQUAL:
        return 1.0 - poisson_cdf(x, theta0)
    if kind is AssertionKind.POINT:
        return 0.0
    return 1.0 - poisson_pmf(x, theta0)
