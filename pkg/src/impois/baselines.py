"""Textbook tests for ``H0: theta = theta0`` read as plausibility functions."""

from __future__ import annotations

import math

from .dist import poisson_cdf

__all__ = ["standard_normal_cdf", "normal_approx_pvalue", "equal_tail_pvalue"]


def standard_normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_approx_pvalue(x: int, theta0: float) -> float:
    """``2 - 2 Phi(|x - theta0| / sqrt(theta0))`` from ``X ~ N(theta0, theta0)``."""
    if not theta0 > 0:
        raise ValueError(f"theta0 must be positive, got {theta0!r}")
    # erfc keeps the upper tail accurate where 2 - 2 Phi would cancel
    return math.erfc(abs(x - theta0) / math.sqrt(2.0 * theta0))


def equal_tail_pvalue(x: int, theta0: float, capped: bool = False) -> float:
    """Poisson equal-tail p-value ``2 min(F(x), 1 - F(x - 1))``.

    The raw value can exceed one near the mode; ``capped=True`` clips it to
    ``[0, 1]`` for plotting.  Rejection decisions use the raw value.
    """
    if not theta0 > 0:
        raise ValueError(f"theta0 must be positive, got {theta0!r}")
    p = 2.0 * min(poisson_cdf(x, theta0), 1.0 - poisson_cdf(x - 1, theta0))
    return min(1.0, p) if capped else p
