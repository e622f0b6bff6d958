"""Randomized invariants of the discrete maximal operators."""

import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from dichotomy.lognum import LogNumber
from dichotomy.maximal import (
    NoncenteredDiscrete,
    brute_force_discrete_max,
    centered_max_truncated,
    noncentered_max_truncated,
)
from dichotomy.space import (
    Added,
    Constant,
    DiscreteWeights,
    MetricKind,
    Scaled,
    Tabulated,
    Window,
    point,
)

HALF = Fraction(1, 2)
WINDOW = Window.square(4)
CELLS = list(WINDOW.points())
EXAMPLES = settings(max_examples=200, deadline=None)

weights = st.lists(st.integers(1, 9), min_size=len(CELLS), max_size=len(CELLS))
values = st.lists(st.integers(0, 4), min_size=len(CELLS), max_size=len(CELLS))
query = st.tuples(st.integers(-2, 2), st.integers(-2, 2))
metric = st.sampled_from([MetricKind.SUPREMUM, MetricKind.EUCLIDEAN])
radius_cap = st.integers(1, 3)


def instance(ws, vs):
    mu = DiscreteWeights(2, "UNIT", dict(zip(CELLS, ws)))
    f = Tabulated(dict(zip(CELLS, vs)))
    return mu, f


def radii(R):
    return [HALF] + list(range(1, R + 1))


def nc(mu, f, x, R, m=MetricKind.SUPREMUM):
    return noncentered_max_truncated(mu, f, point(*x), NoncenteredDiscrete(WINDOW, R, m)).sup


@EXAMPLES
@given(weights, values, query, radius_cap, metric)
def test_truncation_monotone(ws, vs, x, R, m):
    mu, f = instance(ws, vs)
    c = centered_max_truncated(mu, f, point(*x), radii(R + 1), metric=m)
    running = [rec.average for rec in c.records]
    assert max(running[:-1]) <= max(running)
    assert nc(mu, f, x, R, m) <= nc(mu, f, x, R + 1, m)


@EXAMPLES
@given(weights, values, query, radius_cap, metric)
def test_centered_dominated_by_noncentered(ws, vs, x, R, m):
    mu, f = instance(ws, vs)
    c = centered_max_truncated(mu, f, point(*x), radii(R), metric=m)
    assert c.sup <= nc(mu, f, x, R, m)


@EXAMPLES
@given(weights, values, query, radius_cap, st.fractions(min_value=Fraction(1, 7), max_value=7))
def test_positive_homogeneity(ws, vs, x, R, c):
    mu, f = instance(ws, vs)
    assert nc(mu, Scaled(f, c), x, R).exact == c * nc(mu, f, x, R).exact
    cen = centered_max_truncated(mu, f, point(*x), radii(R)).sup
    assert centered_max_truncated(mu, Scaled(f, c), point(*x), radii(R)).sup.exact == c * cen.exact


@EXAMPLES
@given(weights, values, query, radius_cap, st.floats(-300, 300))
def test_measure_rescaling_in_log_domain(ws, vs, x, R, shift):
    # multiplying every weight by e^shift leaves each average unchanged
    mu, f = instance(ws, vs)
    table = {p: LogNumber.from_log(math.log(w) + shift) for p, w in zip(CELLS, ws)}
    default = LogNumber.from_log(shift)
    far = {(a, b): default for a in range(-8, 9) for b in range(-8, 9) if (a, b) not in table}
    logged = DiscreteWeights(2, "UNIT", {**far, **table})
    exact = centered_max_truncated(mu, f, point(*x), radii(R)).sup
    scaled = centered_max_truncated(logged, f, point(*x), radii(R)).sup
    if exact.is_zero:
        assert scaled.is_zero
    else:
        assert abs(scaled.log - exact.log) <= 1e-9 * max(1.0, abs(shift))


@EXAMPLES
@given(weights, values, values, query, radius_cap)
def test_subadditive_per_ball(ws, vs, us, x, R):
    mu, f = instance(ws, vs)
    g = Tabulated(dict(zip(CELLS, us)))
    both = centered_max_truncated(mu, Added(f, g), point(*x), radii(R))
    one = centered_max_truncated(mu, f, point(*x), radii(R))
    two = centered_max_truncated(mu, g, point(*x), radii(R))
    for s, a, b in zip(both.records, one.records, two.records):
        assert s.average.exact == a.average.exact + b.average.exact
    assert both.sup.exact <= one.sup.exact + two.sup.exact
    assert nc(mu, Added(f, g), x, R).exact <= nc(mu, f, x, R).exact + nc(mu, g, x, R).exact


@EXAMPLES
@given(weights, query, radius_cap, st.fractions(min_value=0, max_value=50), metric)
def test_constant_fixed_point(ws, x, R, c, m):
    mu, _ = instance(ws, [0] * len(CELLS))
    assert centered_max_truncated(mu, Constant(c), point(*x), radii(R), metric=m).sup.exact == c
    assert nc(mu, Constant(c), x, R, m).exact == c


@EXAMPLES
@given(weights, values, query, radius_cap, metric)
def test_singleton_lower_bound(ws, vs, x, R, m):
    mu, f = instance(ws, vs)
    fx = f.lattice_value(x)
    assert centered_max_truncated(mu, f, point(*x), radii(R), metric=m).sup.exact >= fx
    assert nc(mu, f, x, R, m).exact >= fx


@EXAMPLES
@given(weights, values, query, radius_cap, metric)
def test_fast_sweep_matches_enumeration(ws, vs, x, R, m):
    mu, f = instance(ws, vs)
    fast = nc(mu, f, x, R, m)
    assert fast.exact == brute_force_discrete_max(mu, f, point(*x), WINDOW, R, m).exact
