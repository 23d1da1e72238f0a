"""Independent reference computations used by the tests.

Nothing here imports the package's numerics; distribution values come from
exact factorial arithmetic or scipy.
"""

import math

import numpy as np
from scipy import special, stats


def pmf_exact(x, theta):
    return math.exp(-theta) * theta**x / math.factorial(x)


def naive_ranking(theta0, epsilon):
    """Re-run the recursive selection rule step by step, recomputing every
    sum from scratch over the candidate set with ``math.fsum``."""
    n = 0
    while math.fsum(pmf_exact(k, theta0) for k in range(n + 1)) < 1 - epsilon:
        n += 1
    support = list(range(n + 1))
    plus = sorted(x for x in support if x - theta0 >= 0)
    minus = sorted((x for x in support if x - theta0 < 0), reverse=True)
    chosen = []

    def tau(cells):
        num = math.fsum((x - theta0) * pmf_exact(x, theta0) for x in cells)
        den = math.fsum(pmf_exact(x, theta0) for x in cells)
        return num / den

    def nu(cells):
        return math.fsum(((x - theta0) ** 2 - theta0) * pmf_exact(x, theta0) for x in cells)

    while plus or minus:
        if not plus:
            chosen.append(minus.pop(0))
        elif not minus:
            chosen.append(plus.pop(0))
        else:
            e1 = chosen + [plus[0]]
            e2 = chosen + [minus[0]]
            if abs(tau(e1)) <= abs(tau(e2)) and nu(e1) <= 0:
                chosen.append(plus.pop(0))
            elif nu(e2) <= 0:
                chosen.append(minus.pop(0))
            else:
                raise RuntimeError("stop")
    return chosen


def conflict_by_containment(order, x, beta):
    """Conflict mass from the support sets themselves.

    Cells ``(G_{k+1}(beta), G_k(beta)]`` are added in rank order; the conflict
    set is the largest prefix union lying inside ``(0, G_{x+1}(beta)]``, and
    its mass is its Lebesgue measure on the u-scale.
    """
    limit = special.gammainc(x + 1, beta)
    mass = 0.0
    for k in order:
        top = 1.0 if k == 0 else special.gammainc(k, beta)
        bottom = special.gammainc(k + 1, beta)
        if top > limit + 1e-15:
            break
        mass += top - bottom
    return mass


def exact_pl_cdf(pl_values, theta, alpha_grid):
    """Exact P(pl_X <= alpha) for X ~ Pois(theta), given pl for x = 0..len-1."""
    xs = np.arange(len(pl_values))
    w = stats.poisson.pmf(xs, theta)
    pl_values = np.asarray(pl_values)
    return np.array([w[pl_values <= a].sum() for a in alpha_grid])
