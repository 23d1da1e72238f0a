"""Poisson and gamma distribution numerics.

The regularized lower incomplete gamma function ``P(a, t)`` is evaluated by its
power series when ``t < a + 1`` and by a modified-Lentz continued fraction for
the upper function ``Q(a, t)`` otherwise.  Poisson probabilities are summed
directly from log-space mass values, so ``F_theta(x) = 1 - G_{x+1}(theta)`` is
an identity between two independent code paths rather than a definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "PoissonParam",
    "GammaShape",
    "poisson_pmf",
    "poisson_cdf",
    "poisson_pmf_table",
    "poisson_cdf_table",
    "gamma_cdf",
    "gamma_sf",
    "truncation_bound",
    "poisson_sample",
]

_TOL = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


@dataclass(frozen=True)
class PoissonParam:
    """Poisson mean (events per observation window)."""

    theta: float

    def __post_init__(self):
        _check_theta(self.theta)


@dataclass(frozen=True)
class GammaShape:
    """Shape of a unit-rate gamma distribution."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"gamma shape must be positive, got {self.a!r}")


def _check_theta(theta):
    if not theta > 0 or not math.isfinite(theta):
        raise ValueError(f"Poisson mean must be positive and finite, got {theta!r}")


def poisson_pmf(x: int, theta: float) -> float:
    """Poisson mass ``exp(-theta) theta**x / x!`` evaluated in log space."""
    _check_theta(theta)
    if x < 0:
        return 0.0
    return math.exp(x * math.log(theta) - theta - math.lgamma(x + 1))


def poisson_cdf(x: int, theta: float) -> float:
    """Poisson distribution function ``F_theta(x)``; zero for ``x < 0``."""
    _check_theta(theta)
    if x < 0:
        return 0.0
    return min(1.0, math.fsum(poisson_pmf_table(theta, int(x))))


@lru_cache(maxsize=8)
def _log_factorials(n: int) -> np.ndarray:
    out = np.array([math.lgamma(k + 1.0) for k in range(n + 1)])
    out.flags.writeable = False
    return out


def _log_factorial_table(n: int) -> np.ndarray:
    # round the cached length up so repeated calls share one table
    size = max(256, 1 << int(n).bit_length())
    return _log_factorials(size)[: n + 1]


def poisson_pmf_table(theta: float, n: int) -> np.ndarray:
    """Vector ``[f_theta(0), ..., f_theta(n)]``."""
    _check_theta(theta)
    k = np.arange(n + 1, dtype=float)
    return np.exp(k * math.log(theta) - theta - _log_factorial_table(n))


def poisson_cdf_table(theta: float, n: int) -> np.ndarray:
    """Vector ``[F_theta(0), ..., F_theta(n)]`` by cumulative summation."""
    return np.minimum(np.cumsum(poisson_pmf_table(theta, n)), 1.0)


def _gamma_prefactor(a: float, t: float) -> float:
    return math.exp(a * math.log(t) - t - math.lgamma(a))


def _gamma_series(a: float, t: float) -> float:
    # P(a, t) = t^a e^-t / Gamma(a) * sum_n t^n / (a (a+1) ... (a+n))
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= t / ap
        total += term
        if abs(term) < abs(total) * _TOL:
            return total * _gamma_prefactor(a, t)
    raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, t={t})")


def _gamma_continued_fraction(a: float, t: float) -> float:
    # Q(a, t) by modified Lentz on the Legendre continued fraction
    b = t + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _TOL:
            return h * _gamma_prefactor(a, t)
    raise ArithmeticError(f"incomplete gamma fraction did not converge (a={a}, t={t})")


def _check_gamma_args(a, theta):
    if not a > 0:
        raise ValueError(f"gamma shape must be positive, got {a!r}")
    if not theta >= 0:
        raise ValueError(f"gamma argument must be nonnegative, got {theta!r}")


def gamma_cdf(a: float, theta: float) -> float:
    """Regularized lower incomplete gamma function ``G_a(theta) = P(a, theta)``.

    This is the distribution function at ``theta`` of a gamma variable with
    shape ``a`` and unit rate.
    """
    _check_gamma_args(a, theta)
    if theta == 0:
        return 0.0
    if math.isinf(theta):
        return 1.0
    if theta < a + 1.0:
        return min(1.0, _gamma_series(a, theta))
    return max(0.0, 1.0 - _gamma_continued_fraction(a, theta))


def gamma_sf(a: float, theta: float) -> float:
    """Upper regularized incomplete gamma ``Q(a, theta) = 1 - P(a, theta)``.

    Accurate in relative terms in the upper tail, where ``1 - gamma_cdf``
    would cancel.
    """
    _check_gamma_args(a, theta)
    if theta == 0:
        return 1.0
    if math.isinf(theta):
        return 0.0
    if theta < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, theta))
    return min(1.0, _gamma_continued_fraction(a, theta))


def truncation_bound(theta: float, epsilon: float) -> int:
    """Smallest ``N`` with ``F_theta(N) >= 1 - epsilon``."""
    _check_theta(theta)
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    n = int(theta + 12.0 * math.sqrt(theta) + 40)
    while True:
        cdf = poisson_cdf_table(theta, n)
        hit = np.flatnonzero(cdf >= 1.0 - epsilon)
        if hit.size:
            return int(hit[0])
        if cdf[-1] == cdf[-2]:
            # cumulative sum saturated below 1 - epsilon in floating point
            return n
        n *= 2


@lru_cache(maxsize=256)
def _inversion_table(theta: float) -> np.ndarray:
    n = truncation_bound(theta, 1e-17 if theta < 1e3 else 1e-15)
    return poisson_cdf_table(theta, n + 8)


def poisson_sample(theta: float, rng: np.random.Generator, size=None):
    """Draw Poisson counts by exact inversion of the distribution function.

    Returns the smallest ``x`` with ``F_theta(x) >= 1 - U`` for ``U`` drawn
    from ``rng``; this is the Poisson association written as a sampler.
    """
    _check_theta(theta)
    u = rng.random(size)
    return inverse_cdf(theta, u)


def inverse_cdf(theta: float, u):
    """Map uniforms ``u`` to counts via the smallest ``x`` with ``F(x) >= 1 - u``."""
    cdf = _inversion_table(theta)
    x = np.searchsorted(cdf, 1.0 - np.asarray(u, dtype=float), side="left")
    x = np.minimum(x, cdf.size - 1)
    if np.ndim(x) == 0:
        return int(x)
    return x.astype(np.int64)
