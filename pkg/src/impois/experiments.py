"""Monte Carlo harness: plausibility CDFs, interval coverage, interval widths.

Replicates are grouped into fixed blocks of ``BLOCK`` draws.  Block ``b`` of
the stream for a given true mean is generated by a Philox counter-based
generator keyed on ``(seed, stream)`` with the block index in the counter, so
every replicate's uniform depends only on the seed, the stream and its own
index.  Workers return per-count histograms, which are summed; results are
therefore identical for any number of workers.
"""

from __future__ import annotations

import io
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache, partial

import numpy as np

from .baselines import equal_tail_pvalue, normal_approx_pvalue
from .constrained import lambda_interval
from .dist import inverse_cdf
from .ordering import DEFAULT_EPSILON, build_ranking
from .two_sided import plausibility_interval

__all__ = [
    "BLOCK",
    "METHODS",
    "SimConfig",
    "SimReport",
    "default_alpha_grid",
    "replicate_uniforms",
    "simulate_counts",
    "pl_tables",
    "pl_cdf_simulation",
    "coverage_simulation",
    "width_table",
    "validity_report",
]

BLOCK = 8192
METHODS = ("im", "normal", "equal-tail")
_MASK64 = (1 << 64) - 1


def default_alpha_grid():
    return tuple(round(k / 100, 2) for k in range(1, 100))


@dataclass(frozen=True)
class SimConfig:
    theta0: float
    theta_true_list: tuple
    n_samples: int = 100_000
    seed: int = 0
    alpha_grid: tuple = field(default_factory=default_alpha_grid)
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        object.__setattr__(self, "theta_true_list", tuple(float(t) for t in self.theta_true_list))
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        if not self.theta0 > 0:
            raise ValueError("theta0 must be positive")
        if not self.theta_true_list or min(self.theta_true_list) <= 0:
            raise ValueError("theta_true_list must hold positive means")
        _check_n(self.n_samples)
        a = np.asarray(self.alpha_grid)
        if a.size == 0 or np.any(a <= 0) or np.any(a >= 1) or np.any(np.diff(a) <= 0):
            raise ValueError("alpha_grid must be strictly increasing inside (0, 1)")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"number of Monte Carlo samples must be a positive integer, got {n!r}")


@dataclass
class SimReport:
    """A table of simulation output plus the configuration that produced it."""

    kind: str
    methods: tuple
    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)

    def column(self, name, **where):
        i = self.columns.index(name)
        keys = [(self.columns.index(k), v) for k, v in where.items()]
        return np.array([row[i] for row in self.rows if all(row[j] == v for j, v in keys)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(format_value(v) for v in row) + "\n")
        return buf.getvalue()


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    return str(v)


def stream_id(theta: float) -> int:
    """Stream key for a true mean: the IEEE-754 bit pattern of ``theta``."""
    return struct.unpack("<Q", struct.pack("<d", float(theta)))[0]


def _block_generator(seed, stream, block):
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, block, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def replicate_uniforms(seed: int, stream: int, start: int, stop: int) -> np.ndarray:
    """Uniforms for replicate indices ``start .. stop - 1`` of one stream."""
    out = []
    for b in range(start // BLOCK, (stop - 1) // BLOCK + 1):
        u = _block_generator(seed, stream, b).random(BLOCK)
        lo = max(start, b * BLOCK) - b * BLOCK
        hi = min(stop, (b + 1) * BLOCK) - b * BLOCK
        out.append(u[lo:hi])
    return np.concatenate(out) if out else np.empty(0)


def _block_histogram(block, *, theta, n, seed, stream):
    start = block * BLOCK
    u = replicate_uniforms(seed, stream, start, min(n, start + BLOCK))
    return np.bincount(inverse_cdf(theta, u))


def _map(fn, items, workers):
    if workers is None or workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def simulate_counts(theta: float, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """Histogram of ``n`` Poisson(theta) draws: ``counts[x]`` = number equal to x."""
    _check_n(n)
    task = partial(_block_histogram, theta=float(theta), n=int(n), seed=int(seed), stream=stream_id(theta))
    parts = _map(task, list(range(math.ceil(n / BLOCK))), workers)
    counts = np.zeros(max(len(p) for p in parts), dtype=np.int64)
    for p in parts:
        counts[: len(p)] += p
    return counts


def pl_tables(theta0: float, x_max: int, epsilon: float = DEFAULT_EPSILON) -> dict:
    """Plausibility of ``{theta0}`` for ``x = 0..x_max`` under each method."""
    im = 1.0 - build_ranking(theta0, epsilon).lower_mass_table(x_max)
    return {
        "im": np.maximum(im, 0.0),
        "normal": np.array([normal_approx_pvalue(x, theta0) for x in range(x_max + 1)]),
        "equal-tail": np.array([equal_tail_pvalue(x, theta0) for x in range(x_max + 1)]),
    }


def _ecdf(counts, values, alpha_grid):
    n = counts.sum()
    return [float(counts[values <= a].sum() / n) for a in alpha_grid]


def pl_cdf_simulation(config: SimConfig, workers: int = 1) -> SimReport:
    """Empirical CDF of ``pl_X(theta0)`` under ``X ~ Pois(theta)`` for each method."""
    rows = []
    for theta in config.theta_true_list:
        counts = simulate_counts(theta, config.n_samples, config.seed, workers)
        tables = pl_tables(config.theta0, len(counts) - 1, config.epsilon)
        for method in METHODS:
            for a, e in zip(config.alpha_grid, _ecdf(counts, tables[method], config.alpha_grid)):
                rows.append((method, theta, a, e))
    return SimReport("pl-cdf", METHODS, ("method", "theta_true", "alpha", "ecdf"), rows, {"config": asdict(config)})


def validity_report(config: SimConfig, workers: int = 1) -> SimReport:
    """Check each method's plausibility CDF against the uniform diagonal at the null.

    The simulation is run at ``theta = theta0``.  A method fails when, at some
    ``alpha``, its empirical CDF exceeds ``alpha`` by more than
    ``3 sqrt(alpha (1 - alpha) / n)``.
    """
    null = SimConfig(config.theta0, (config.theta0,), config.n_samples, config.seed, config.alpha_grid, config.epsilon)
    sim = pl_cdf_simulation(null, workers)
    alpha = np.asarray(config.alpha_grid)
    threshold = 3.0 * np.sqrt(alpha * (1.0 - alpha) / config.n_samples)
    rows = []
    verdict = {}
    for method in METHODS:
        excess = sim.column("ecdf", method=method) - alpha
        worst = int(np.argmax(excess - threshold))
        passed = bool(np.all(excess <= threshold))
        verdict[method] = passed
        rows.append((method, config.theta0, float(excess.max()), float(alpha[worst]), passed))
    meta = {"config": asdict(null), "verdict": verdict, "simulation": sim}
    return SimReport("validity", METHODS, ("method", "theta_true", "max_excess", "worst_alpha", "pass"), rows, meta)


@lru_cache(maxsize=4096)
def _interval_for(x, beta, alpha, epsilon):
    if beta == 0:
        return plausibility_interval(x, alpha, epsilon)
    return lambda_interval(x, beta, alpha, epsilon)


def _interval_task(x, *, beta, alpha, epsilon):
    return _interval_for(x, beta, alpha, epsilon)


def interval_table(x_values, beta, alpha, epsilon=DEFAULT_EPSILON, workers=1):
    """Intervals for each count; ``beta == 0`` gives unconstrained intervals for theta."""
    task = partial(_interval_task, beta=float(beta), alpha=float(alpha), epsilon=float(epsilon))
    return _map(task, [int(x) for x in x_values], workers)


def coverage_simulation(
    beta: float,
    lambda_grid,
    alpha: float,
    n: int,
    seed: int,
    epsilon: float = DEFAULT_EPSILON,
    workers: int = 1,
) -> SimReport:
    """Empirical coverage of the level-``alpha`` interval for the signal rate.

    For each ``lam`` draw ``X ~ Pois(lam + beta)`` and count how often the
    interval computed from ``X`` contains ``lam``.  With ``beta = 0`` the
    unconstrained interval for the Poisson mean is used instead.
    """
    _check_n(n)
    if not beta >= 0:
        raise ValueError("beta must be nonnegative")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    lambdas = [float(v) for v in lambda_grid]
    if any(lam + beta <= 0 for lam in lambdas):
        raise ValueError("every lam + beta must be positive")
    histograms = [simulate_counts(lam + beta, n, seed, workers) for lam in lambdas]
    x_max = max(len(h) for h in histograms) - 1
    intervals = interval_table(range(x_max + 1), beta, alpha, epsilon, workers)
    rows = []
    for lam, counts in zip(lambdas, histograms):
        covered = np.array([intervals[x].contains(lam) for x in range(len(counts))])
        rows.append((lam, float(counts[covered].sum() / n), int(n)))
    meta = {"beta": beta, "alpha": alpha, "seed": seed, "epsilon": epsilon}
    return SimReport("coverage", ("im" if beta == 0 else "ebsb",), ("lambda", "coverage", "n"), rows, meta)


def width_table(beta: float, x_range, alpha: float, epsilon: float = DEFAULT_EPSILON, workers: int = 1) -> SimReport:
    """Interval endpoints and widths per count on the signal scale ``theta - beta``.

    ``ebsb`` rows are the constrained intervals; ``im`` rows are the
    unconstrained plausibility intervals shifted by ``beta``, for reference.
    """
    xs = [int(x) for x in x_range]
    constrained = interval_table(xs, beta, alpha, epsilon, workers)
    free = interval_table(xs, 0.0, alpha, epsilon, workers)
    rows = []
    for x, c, u in zip(xs, constrained, free):
        rows.append((x, "ebsb", c.lower, c.upper, c.width))
        rows.append((x, "im", u.lower - beta, u.upper - beta, u.width))
    meta = {"beta": beta, "alpha": alpha, "epsilon": epsilon}
    return SimReport("width", ("ebsb", "im"), ("x", "method", "lower", "upper", "width"), rows, meta)
