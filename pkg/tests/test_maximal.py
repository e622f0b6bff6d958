"""Truncated centered and non-centered maximal operators."""

import math
from fractions import Fraction

import pytest
from scipy.special import erfi

from dichotomy.errors import EmptyFamily
from dichotomy.maximal import (
    Noncentered1D,
    Noncentered2DGrid,
    NoncenteredDiscrete,
    ball_average,
    brute_force_discrete_max,
    centered_max_truncated,
    geometric_endpoints,
    noncentered_by_radius,
    noncentered_max_truncated,
    oscillation_average,
)
from dichotomy.space import (
    EX1_F,
    EX3_F,
    EX4_G,
    Ball,
    Constant,
    DiscreteWeights,
    MetricKind,
    Tabulated,
    Window,
    ex1_measure,
    ex3_measure,
    ex4_measure,
    point,
)

SUP = MetricKind.SUPREMUM
EUC = MetricKind.EUCLIDEAN


def ex1_closed_form(r):
    """A_r f(0) for f = x_+ under e^{x^2} dx."""
    return math.expm1(r * r) / 2 / (math.sqrt(math.pi) * erfi(r))


def test_centered_matches_closed_form():
    radii = list(range(1, 9))
    res = centered_max_truncated(ex1_measure(), EX1_F, point(0), radii)
    for r, rec in zip(radii, res.records):
        assert float(rec.average) == pytest.approx(ex1_closed_form(r), rel=1e-9)
    assert res.argmax_radius == 8
    assert float(res.sup) < 4


def test_centered_ties_go_to_smallest_radius():
    res = centered_max_truncated(ex3_measure(), Constant(3), point(2, 1), [1, 2, 3])
    assert res.sup.exact == 3
    assert res.argmax_radius == 1


def test_centered_rejects_bad_radius_lists():
    with pytest.raises(EmptyFamily):
        centered_max_truncated(ex3_measure(), EX3_F, point(0, 0), [])
    with pytest.raises(ValueError):
        centered_max_truncated(ex3_measure(), EX3_F, point(0, 0), [2, 1])
    with pytest.raises(ValueError):
        centered_max_truncated(ex3_measure(), EX3_F, point(0, 0), [0, 1])


def test_centered_exact_lattice_values():
    # B_5((5,0)) in sup metric
    res = centered_max_truncated(ex3_measure(), EX3_F, point(5, 0), [5])
    assert res.sup.exact == Fraction(1022, 81)
    single = ball_average(ex3_measure(), EX3_F, Ball(point(5, 0), 5, SUP))
    assert single.average == res.sup


@pytest.mark.parametrize("mu,f", [(ex3_measure(), EX3_F), (ex4_measure(), EX4_G)])
@pytest.mark.parametrize("x", [(0, 0), (3, 0), (-2, 1), (1, -3)])
@pytest.mark.parametrize("metric", [SUP, EUC])
def test_fast_sweep_equals_brute_force(mu, f, x, metric):
    window = Window.square(4)
    fam = NoncenteredDiscrete(window, 4, metric)
    fast = noncentered_max_truncated(mu, f, point(*x), fam)
    slow = brute_force_discrete_max(mu, f, point(*x), window, 4, metric)
    assert fast.sup.exact == slow.exact


def test_fast_sweep_matches_generic_path():
    mu = ex4_measure()
    fam = NoncenteredDiscrete(Window.square(3), 3)
    fast = noncentered_by_radius(mu, EX4_G, point(1, 0), fam)
    # log-valued weights switch off the exact sweep
    logged = DiscreteWeights(2, "EX4", {(99, 99): math.e})
    generic = noncentered_by_radius(logged, EX4_G, point(1, 0), fam)
    assert [r for r, _ in fast] == [r for r, _ in generic]
    for (_, a), (_, b) in zip(fast, generic):
        assert float(a.average) == pytest.approx(float(b.average), rel=1e-12)


def test_noncentered_tie_rule():
    fam = NoncenteredDiscrete(Window.square(2), 2)
    res = noncentered_max_truncated(ex3_measure(), Constant(1), point(0, 0), fam)
    assert res.argmax.radius == Fraction(1, 2)
    assert res.argmax.center.coords == (0, 0)


def test_tabulated_peak_found():
    f = Tabulated({(2, 2): 10})
    mu = DiscreteWeights(2, "UNIT")
    fam = NoncenteredDiscrete(Window.square(3), 3)
    res = noncentered_max_truncated(mu, f, point(1, 1), fam)
    # open sup balls of radius <= 1 are single points; the 3x3 box is the best
    assert res.sup.exact == Fraction(10, 9)


def test_noncentered_empty_family():
    fam = NoncenteredDiscrete(Window.square(1, center=(20, 20)), 2)
    with pytest.raises(EmptyFamily):
        noncentered_max_truncated(ex3_measure(), EX3_F, point(0, 0), fam)


def test_centered_le_noncentered_on_lattice():
    fam = NoncenteredDiscrete(Window.square(6), 6)
    for x in [(0, 0), (2, 0), (-3, 2)]:
        c = centered_max_truncated(ex3_measure(), EX3_F, point(*x), [Fraction(1, 2)] + list(range(1, 7)))
        n = noncentered_max_truncated(ex3_measure(), EX3_F, point(*x), fam)
        assert c.sup <= n.sup


def test_interval_family():
    ends = geometric_endpoints(0.0, 0.25, 4.0, 3)
    assert ends == (-4.0, -1.0, -0.25, 0.25, 1.0, 4.0)
    fam = Noncentered1D(ends)
    balls = list(fam.balls(point(0)))
    assert len(balls) == 9
    assert [float(b.radius) for b in balls] == sorted(float(b.radius) for b in balls)
    res = noncentered_max_truncated(ex1_measure(), EX1_F, point(0), fam)
    # the interval (-0.25, 4) dominates
    assert res.argmax.center.coords[0] == pytest.approx(1.875)


def test_grid_family_contains_point():
    fam = Noncentered2DGrid(0.5, (0.0, 0.0), (1.0, 1.0), (0.3, 1.0))
    balls = list(fam.balls(point(0.5, 0.5, lattice=False)))
    assert len(balls) == 1 + 9
    assert all(float(b.radius) in (0.3, 1.0) for b in balls)


def test_oscillation_average():
    mu = DiscreteWeights(2, "UNIT")
    b = Ball(point(0, 0), 2, SUP)
    assert oscillation_average(mu, Constant(5), b, point(0, 0)).exact == 0
    f = Tabulated({(0, 0): 9})
    # |f - 9| is 9 on the eight other points
    assert oscillation_average(mu, f, b, point(0, 0)).exact == 8
