import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from impois.ordering import build_ranking
from impois.two_sided import (
    EmptyLevelSet,
    THETA_TOL,
    level_set_hull,
    plausibility_curve,
    plausibility_interval,
    point_plausibility,
    two_sided_belief,
)

from oracles import pmf_exact


def test_peak_value():
    assert point_plausibility(7, 7.0) == 1.0
    assert two_sided_belief(7, 7.0) == 0.0


@pytest.mark.parametrize("m", [1, 2, 9, 20])
def test_integer_mean_at_its_own_count(m):
    assert point_plausibility(m, float(m)) == 1.0


def test_second_ranked_count_belief():
    second = build_ranking(7.0).support[1]
    assert two_sided_belief(second, 7.0) == pytest.approx(pmf_exact(7, 7.0), rel=1e-13)
    assert two_sided_belief(second, 7.0) == pytest.approx(0.1490028, abs=1e-7)


def test_count_outside_truncated_support():
    r = build_ranking(3.0, 1e-6)
    assert point_plausibility(r.truncation_bound + 1, 3.0, 1e-6) <= 1e-6


@settings(max_examples=60)
@given(x=st.integers(0, 40), theta0=st.floats(0.05, 40.0))
def test_pl_is_one_minus_a_rank_prefix(x, theta0):
    r = build_ranking(theta0)
    before = [k for k in r.support if r.rank_of(k) < r.rank_of(x)] if x <= r.truncation_bound else list(r.support)
    expected = 1 - math.fsum(pmf_exact(k, theta0) for k in before)
    assert point_plausibility(x, theta0) == pytest.approx(max(expected, 0.0), abs=1e-12)
    assert 0.0 <= point_plausibility(x, theta0) <= 1.0


def test_curve_examples():
    c = plausibility_curve(7, np.arange(1.0, 15.0))
    assert c.values[list(c.theta_grid).index(7.0)] == 1.0
    c0 = plausibility_curve(0, np.linspace(2.0, 10.0, 801))
    assert np.all(np.diff(c0.values) <= 0)
    c3 = plausibility_curve(3, np.arange(0.5, 10.01, 0.5))
    assert c3.values[list(c3.theta_grid).index(3.0)] == c3.values.max() == 1.0


def test_curve_is_independent_of_workers():
    grid = np.linspace(0.5, 12.0, 40)
    a = plausibility_curve(5, grid, workers=1)
    b = plausibility_curve(5, grid, workers=2)
    assert np.array_equal(a.values, b.values)


@pytest.mark.parametrize("grid", [[], [1.0, 0.5], [0.0, 1.0]])
def test_curve_rejects_bad_grids(grid):
    with pytest.raises(ValueError):
        plausibility_curve(2, grid)


def test_interval_examples():
    # x = 7 is ranked first exactly for theta0 in [6.5, 7.5)
    narrow = plausibility_interval(7, 0.9999)
    assert narrow.contains(7.0)
    assert narrow.lower == pytest.approx(6.5, abs=2e-6)
    assert narrow.upper == pytest.approx(7.5, abs=2e-6)
    assert plausibility_interval(0, 0.1).lower == 0.0
    iv = plausibility_interval(7, 0.1)
    normal_width = 2 * 1.645 * math.sqrt(7)
    assert abs(iv.width - normal_width) <= 0.15 * normal_width
    assert iv.contiguous


@pytest.mark.parametrize("x", [1, 4, 7, 15, 40])
@pytest.mark.parametrize("alpha", [0.05, 0.1, 0.5])
def test_endpoints_are_level_crossings(x, alpha):
    iv = plausibility_interval(x, alpha)
    assert point_plausibility(x, iv.lower) > alpha
    assert point_plausibility(x, iv.upper) > alpha
    assert point_plausibility(x, iv.upper + 2 * THETA_TOL) <= alpha
    if iv.lower > 0:
        assert point_plausibility(x, iv.lower - 2 * THETA_TOL) <= alpha


@pytest.mark.parametrize("x", [0, 2, 6, 13])
def test_test_rule_matches_membership(x):
    alpha = 0.1
    iv = plausibility_interval(x, alpha)
    for theta in np.linspace(0.01, x + 15.0, 400):
        if min(abs(theta - iv.lower), abs(theta - iv.upper)) < 1e-5:
            continue
        reject = point_plausibility(x, float(theta)) <= alpha
        if iv.contiguous:
            assert reject == (not iv.contains(theta))
        elif not iv.contains(theta):
            assert reject


@pytest.mark.parametrize("x", [1, 3, 8, 21])
@pytest.mark.parametrize("alpha", [0.01, 0.5, 0.99])
def test_integer_count_is_inside_its_interval(x, alpha):
    assert plausibility_interval(x, alpha).contains(float(x))


def test_empty_level_set_is_an_error():
    with pytest.raises(EmptyLevelSet):
        level_set_hull(lambda t: 0.0, 0.5, 1.0, 2.0, floor=1e-8, floor_value=0.0)


def test_non_contiguous_level_set_is_flagged():
    def bumps(t):
        return 1.0 if 1.0 < t < 2.0 or 3.0 < t < 4.0 else 0.0

    lo, hi, contiguous = level_set_hull(bumps, 0.5, 0.5, 5.0, floor=1e-8, floor_value=0.0)
    assert lo == pytest.approx(1.0, abs=2e-6) and hi == pytest.approx(4.0, abs=2e-6)
    assert not contiguous


@pytest.mark.parametrize("args", [(-1, 0.1), (2.5, 0.1), (3, 0.0), (3, 1.0)])
def test_interval_rejects_bad_inputs(args):
    with pytest.raises(ValueError):
        plausibility_interval(*args)
