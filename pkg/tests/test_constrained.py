import numpy as np
import pytest

from impois.constrained import ConstraintSpec, conflict_mass, ebsb_plausibility, lambda_interval
from impois.ordering import build_ranking
from impois.two_sided import plausibility_interval, point_plausibility

from oracles import conflict_by_containment


@pytest.mark.parametrize("beta", [0.7, 3.0, 15.0])
def test_conflict_mass_matches_containment(beta):
    order = build_ranking(beta).support
    for x in range(40):
        assert conflict_mass(x, beta) == pytest.approx(conflict_by_containment(order, x, beta), abs=1e-12)


@pytest.mark.parametrize("beta", [0.7, 3.0, 8.2, 15.0])
def test_conflict_mass_nonincreasing_in_count(beta):
    cm = [conflict_mass(x, beta) for x in range(60)]
    assert np.all(np.diff(cm) <= 1e-15)


@pytest.mark.parametrize("beta", [3.0, 6.0, 11.0])
def test_no_conflict_from_the_top_ranked_count_upward(beta):
    top = build_ranking(beta).support[0]
    for x in range(top, top + 20):
        assert conflict_mass(x, beta) == 0.0
    assert conflict_mass(top - 1, beta) > 0


def test_conflict_examples():
    assert conflict_mass(0, 15.0) > 0
    for beta in (1e-9, 1e-4, 0.0):
        assert all(conflict_mass(x, beta) == 0.0 for x in range(10))


def test_plausibility_vanishes_below_the_background():
    for beta in (3.0, 15.0):
        for x in (0, 2, 5, 20):
            for theta0 in np.linspace(1e-3, beta, 200, endpoint=False):
                assert ebsb_plausibility(x, float(theta0), beta) == 0.0


def test_piecewise_cases():
    assert ebsb_plausibility(4, 7.5, 15.0) == 0.0
    assert ebsb_plausibility(0, 15.0, 15.0) == 1.0
    assert ebsb_plausibility(20, 18.0, 15.0) == point_plausibility(20, 18.0)
    # zero conflict at the boundary falls through to the unconstrained value
    assert conflict_mass(9, 3.0) == 0.0
    assert ebsb_plausibility(9, 3.0, 3.0) == point_plausibility(9, 3.0)


def test_equal_to_unconstrained_above_the_background():
    for theta0 in np.linspace(3.01, 20.0, 60):
        for x in (0, 3, 9):
            assert ebsb_plausibility(x, float(theta0), 3.0) == point_plausibility(x, float(theta0))


def test_interval_pinned_at_zero_under_conflict():
    for beta in (3.0, 15.0):
        iv = lambda_interval(0, beta, 0.1)
        assert iv.lower == 0.0
        assert iv.conflict_mass > 0


def test_small_count_widths_grow():
    widths = [lambda_interval(x, 3.0, 0.1).width for x in range(4)]
    assert np.all(np.diff(widths) >= 0)


@pytest.mark.parametrize("x", [10, 12, 20])
def test_reduces_to_shifted_unconstrained_interval(x):
    beta = 3.0
    free = plausibility_interval(x, 0.1)
    assert conflict_mass(x, beta) == 0.0 and free.lower >= beta
    iv = lambda_interval(x, beta, 0.1)
    assert iv.lower == pytest.approx(free.lower - beta, abs=3e-6)
    assert iv.upper == pytest.approx(free.upper - beta, abs=3e-6)


def test_interval_never_below_zero():
    for x in range(25):
        iv = lambda_interval(x, 3.0, 0.1)
        assert 0.0 <= iv.lower <= iv.upper


def test_bad_inputs():
    with pytest.raises(ValueError):
        ConstraintSpec(-1.0)
    with pytest.raises(ValueError):
        lambda_interval(2, 0.0, 0.1)
    with pytest.raises(ValueError):
        conflict_mass(-1, 3.0)
    assert ConstraintSpec(3.0).signal(5.5) == 2.5
