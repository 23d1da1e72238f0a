"""Point plausibility from the ranking-induced nested random set, plus
plausibility curves and level-set intervals.

For a fixed ``theta0`` the plausibility of ``{theta0}`` given ``x`` is one
minus the ``f_theta0`` mass of every count ranked strictly ahead of ``x``.
As a function of ``theta0`` it is piecewise continuous, with jumps wherever
the ranking changes, so interval endpoints are located by grid scan followed
by bisection on the predicate ``pl > alpha`` rather than by root finding.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .ordering import DEFAULT_EPSILON, build_ranking

__all__ = [
    "PlausibilityCurve",
    "PlausibilityInterval",
    "EmptyLevelSet",
    "point_plausibility",
    "two_sided_belief",
    "plausibility_curve",
    "plausibility_interval",
]

THETA_FLOOR = 1e-8
GRID_POINTS = 512
THETA_TOL = 1e-6


class EmptyLevelSet(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PlausibilityCurve:
    x: int
    theta_grid: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class PlausibilityInterval:
    """Hull ``[lower, upper]`` of ``{theta : pl_x(theta) > alpha}``.

    ``contiguous`` is False when a scanned point strictly inside the hull
    had plausibility at or below ``alpha``.
    """

    x: int
    alpha: float
    lower: float
    upper: float
    contiguous: bool

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def _check_inputs(x, alpha=None):
    if x < 0 or int(x) != x:
        raise ValueError(f"x must be a nonnegative integer, got {x!r}")
    if alpha is not None and not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")


def point_plausibility(x: int, theta0: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Plausibility of ``{theta0}`` given count ``x``."""
    _check_inputs(x)
    ranking = build_ranking(theta0, epsilon)
    return max(0.0, 1.0 - ranking.lower_mass(int(x)))


def two_sided_belief(x: int, theta0: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """Belief in ``{theta0}^c``; equals ``1 - point_plausibility``."""
    _check_inputs(x)
    return min(1.0, build_ranking(theta0, epsilon).lower_mass(int(x)))


def _map(fn, items, workers):
    if workers is None or workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def _pl_at(theta, *, x, epsilon):
    return point_plausibility(x, theta, epsilon)


def plausibility_curve(x: int, theta_grid, epsilon: float = DEFAULT_EPSILON, workers: int = 1) -> PlausibilityCurve:
    """Evaluate ``theta -> pl_x(theta)`` on a grid, one ranking per point."""
    _check_inputs(x)
    grid = np.asarray(theta_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("theta_grid must be a nonempty 1-d sequence")
    if np.any(grid <= 0):
        raise ValueError("theta_grid values must be positive")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("theta_grid must be strictly increasing")
    values = _map(partial(_pl_at, x=int(x), epsilon=epsilon), grid.tolist(), workers)
    return PlausibilityCurve(int(x), grid, np.asarray(values))


def _scan_grid(lo, hi, extra=()):
    pts = [np.geomspace(lo, hi, GRID_POINTS // 4), np.linspace(lo, hi, GRID_POINTS - GRID_POINTS // 4)]
    pts.append([p for p in extra if lo <= p <= hi])
    return np.unique(np.concatenate(pts))


def _boundary(inside, inner, outer, tol):
    """Locate the outermost transition between ``inner`` (inside the level
    set) and ``outer`` (outside).  Returns ``(point, clean)`` where ``point``
    is inside and within ``tol`` of the transition, and ``clean`` is False if
    the bracket held more than one transition."""
    sub = np.linspace(inner, outer, 5)
    flags = [True] + [inside(t) for t in sub[1:-1]] + [False]
    last = max(i for i, f in enumerate(flags) if f)
    clean = all(flags[: last + 1])
    a, b = sub[last], sub[last + 1]
    while abs(b - a) > tol:
        mid = 0.5 * (a + b)
        if inside(mid):
            a = mid
        else:
            b = mid
    return float(a), clean


def level_set_hull(pl, alpha, lo, hi, *, floor, floor_value, extra=(), tol=THETA_TOL):
    """Hull of ``{theta >= floor : pl(theta) > alpha}``.

    The scan starts on ``[lo, hi]`` and widens while an end of the bracket is
    still inside the level set.  When the set reaches ``floor`` the lower
    end is reported as ``floor_value``.  Returns ``(lower, upper, contiguous)``.
    """

    def inside(theta):
        return pl(theta) > alpha

    lo = max(lo, floor)
    for _ in range(64):
        grid = _scan_grid(lo, hi, extra)
        flags = np.array([inside(t) for t in grid])
        grow_low = flags[0] and lo > floor
        grow_high = flags[-1]
        if not (grow_low or grow_high):
            break
        span = hi - lo
        if grow_low:
            lo = max(floor, lo - span)
        if grow_high:
            hi = hi + span
    else:
        raise RuntimeError("level set did not close within the search range")
    if not flags.any():
        raise EmptyLevelSet(f"no theta in [{lo}, {hi}] has plausibility above {alpha}")

    i0 = int(np.argmax(flags))
    i1 = int(len(flags) - 1 - np.argmax(flags[::-1]))
    contiguous = bool(flags[i0 : i1 + 1].all())
    if i0 == 0:
        lower = floor_value
    else:
        lower, clean = _boundary(inside, grid[i0], grid[i0 - 1], tol)
        contiguous &= clean
    upper, clean = _boundary(inside, grid[i1], grid[i1 + 1], tol)
    contiguous &= clean
    return lower, upper, contiguous


def search_bracket(x: int):
    half = 10.0 * math.sqrt(x + 1.0)
    return max(THETA_FLOOR, x - half), x + half + 10.0


def plausibility_interval(x: int, alpha: float, epsilon: float = DEFAULT_EPSILON) -> PlausibilityInterval:
    """The ``100(1 - alpha)%`` plausibility interval for the Poisson mean.

    A lower end of 0 means the level set extends down to the boundary of the
    parameter space.
    """
    _check_inputs(x, alpha)
    x = int(x)
    lo, hi = search_bracket(x)
    lower, upper, contiguous = level_set_hull(
        partial(_pl_at, x=x, epsilon=epsilon),
        alpha,
        lo,
        hi,
        floor=THETA_FLOOR,
        floor_value=0.0,
        extra=(float(x),) if x > 0 else (),
    )
    return PlausibilityInterval(x, alpha, lower, upper, contiguous)
