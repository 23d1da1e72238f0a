"""Recursive score-balanced ranking of the truncated Poisson sample space.

Counts are absorbed one at a time into a growing set ``E_r``.  At each step
the two candidates are the smallest not-yet-ranked count with nonnegative
score and the largest one with negative score; the candidate whose addition
keeps the log-derivative of ``sum_{E_r} f_theta`` closest to zero wins,
provided the curvature proxy ``sum_{E_r} V f`` stays nonpositive.

Scores use the natural-parameter convention ``T = x - theta0`` and
``V = (x - theta0)**2 - theta0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .dist import poisson_pmf_table, truncation_bound

__all__ = [
    "DEFAULT_EPSILON",
    "OrderingStopped",
    "ScorePair",
    "Ranking",
    "Diagnostics",
    "truncate_support",
    "build_ranking",
    "diagnostics",
    "psi_curve",
]

DEFAULT_EPSILON = 1e-10


class OrderingStopped(RuntimeError):
    """Both candidates would make the curvature proxy positive.

    Carries the partial ranking so the failure can be inspected.
    """

    def __init__(self, theta0, epsilon, partial, candidates, nu):
        self.theta0 = theta0
        self.epsilon = epsilon
        self.partial = tuple(partial)
        self.candidates = candidates
        self.nu = nu
        super().__init__(
            f"ordering stopped at rank {len(partial) + 1} for theta0={theta0}: "
            f"candidates {candidates} give nu={nu}"
        )


@dataclass(frozen=True)
class ScorePair:
    t: float
    v: float

    @classmethod
    def at(cls, x: int, theta0: float) -> "ScorePair":
        t = x - theta0
        return cls(t, t * t - theta0)


@dataclass(frozen=True, eq=False)
class Ranking:
    """Ranking of ``{0, ..., truncation_bound}`` for a fixed ``theta0``.

    ``support[r - 1]`` is the count with rank ``r``.  Counts beyond the
    truncation bound share rank ``len(support) + 1``.
    """

    theta0: float
    epsilon: float
    support: tuple
    truncation_bound: int
    pmf: np.ndarray = field(repr=False)
    _ranks: np.ndarray = field(repr=False)
    _prefix: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.support)

    def rank_of(self, x: int) -> int:
        if x < 0:
            raise ValueError(f"x must be nonnegative, got {x}")
        if x > self.truncation_bound:
            return self.size + 1
        return int(self._ranks[x])

    def mass_before_rank(self, r: int) -> float:
        """Total ``f_theta0`` mass of the counts with rank below ``r``."""
        return float(self._prefix[min(r, self.size + 1) - 1])

    def lower_mass(self, x: int) -> float:
        """Total ``f_theta0`` mass of counts ranked strictly before ``x``."""
        return self.mass_before_rank(self.rank_of(x))

    def lower_mass_table(self, n: int) -> np.ndarray:
        """``lower_mass`` for ``x = 0..n`` as a vector."""
        x = np.arange(n + 1)
        ranks = np.full(n + 1, self.size + 1)
        inside = x <= self.truncation_bound
        ranks[inside] = self._ranks[x[inside]]
        return self._prefix[ranks - 1]


@dataclass(frozen=True)
class Diagnostics:
    """Cumulative ``T(r)`` and ``V(r)`` along the ranking, ``r = 1..size``."""

    T: np.ndarray
    V: np.ndarray


def truncate_support(theta0: float, epsilon: float = DEFAULT_EPSILON) -> range:
    """The block ``{0, ..., N}`` with ``N`` minimal such that ``F(N) >= 1 - epsilon``."""
    return range(truncation_bound(theta0, epsilon) + 1)


def build_ranking(theta0: float, epsilon: float = DEFAULT_EPSILON) -> Ranking:
    """Run the recursive ordering for ``theta0``; results are cached."""
    if not theta0 > 0 or not math.isfinite(theta0):
        raise ValueError(f"theta0 must be positive and finite, got {theta0!r}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return _build_ranking(float(theta0), float(epsilon))


@lru_cache(maxsize=8192)
def _build_ranking(theta0: float, epsilon: float) -> Ranking:
    n = truncation_bound(theta0, epsilon)
    f = poisson_pmf_table(theta0, n).tolist()

    # X^+ ascending from its minimum, X^- descending from its maximum
    first_plus = math.ceil(theta0)
    plus = iter(range(first_plus, n + 1))
    minus = iter(range(min(first_plus, n + 1) - 1, -1, -1))
    next_plus = next(plus, None)
    next_minus = next(minus, None)

    order = []
    s_f = s_tf = s_vf = 0.0
    while next_plus is not None or next_minus is not None:
        if next_plus is None:
            take_plus = False
        elif next_minus is None:
            take_plus = True
        else:
            c1, c2 = next_plus, next_minus
            f1, f2 = f[c1], f[c2]
            t1, t2 = c1 - theta0, c2 - theta0
            tau1 = _log_derivative(s_tf + t1 * f1, s_f + f1, t1)
            tau2 = _log_derivative(s_tf + t2 * f2, s_f + f2, t2)
            nu1 = s_vf + (t1 * t1 - theta0) * f1
            nu2 = s_vf + (t2 * t2 - theta0) * f2
            if abs(tau1) <= abs(tau2) and nu1 <= 0:
                take_plus = True
            elif nu2 <= 0:
                take_plus = False
            else:
                raise OrderingStopped(theta0, epsilon, order, (c1, c2), (nu1, nu2))

        if take_plus:
            x, next_plus = next_plus, next(plus, None)
        else:
            x, next_minus = next_minus, next(minus, None)
        t = x - theta0
        order.append(x)
        s_f += f[x]
        s_tf += t * f[x]
        s_vf += (t * t - theta0) * f[x]

    pmf = np.asarray(f)
    ranks = np.empty(n + 1, dtype=np.int64)
    ranks[order] = np.arange(1, n + 2)
    prefix = np.concatenate(([0.0], np.cumsum(pmf[order])))
    for arr in (pmf, ranks, prefix):
        arr.flags.writeable = False
    return Ranking(theta0, epsilon, tuple(order), n, pmf, ranks, prefix)


def _log_derivative(weighted, mass, t):
    # d/d(eta) log sum f = sum (x - theta0) f / sum f; a lone zero-mass cell
    # contributes its own score in the limit
    if mass > 0:
        return weighted / mass
    return t


def diagnostics(ranking: Ranking) -> Diagnostics:
    x = np.asarray(ranking.support, dtype=float)
    t = x - ranking.theta0
    v = t * t - ranking.theta0
    f = ranking.pmf[list(ranking.support)]
    return Diagnostics(np.cumsum(t * f), np.cumsum(v * f))


def psi_curve(ranking: Ranking, x: int, theta_grid) -> np.ndarray:
    """``psi_x(theta) = sum of f_theta over counts ranked before x``."""
    if not 0 <= x <= ranking.truncation_bound:
        raise ValueError(f"x={x} is outside the ranked support 0..{ranking.truncation_bound}")
    before = np.asarray(ranking.support[: ranking.rank_of(x) - 1], dtype=np.int64)
    out = np.empty(len(theta_grid))
    for i, theta in enumerate(theta_grid):
        if before.size == 0:
            out[i] = 0.0
        else:
            out[i] = poisson_pmf_table(theta, int(before.max()))[before].sum()
    return out
