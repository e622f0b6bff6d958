"""Growth ratios, point classification, scans and the sector construction."""

import json
import math
from dataclasses import replace
from fractions import Fraction

import pytest
from scipy.special import erf

from dichotomy.analysis import (
    Classification,
    Mode,
    angle,
    classify_point,
    condition_c_ratio_series,
    dichotomy_scan,
    growth_slope,
    sector_bounds,
    tail_max,
    select_sectors,
    bump_test_function,
    growth_witness_sequence,
)
from dichotomy.errors import SelectionFailed, VerificationFailed, WitnessNotFound
from dichotomy.lognum import LogNumber
from dichotomy.maximal import NoncenteredDiscrete, centered_max_truncated
from dichotomy.space import (
    EX1_F,
    EX3_F,
    EX4_G,
    Ball,
    Constant,
    DiscreteWeights,
    Window,
    axis_heavy_measure,
    ball_mass,
    ex1_measure,
    ex2_measure,
    ex3_measure,
    ex4_measure,
    mirrored,
    point,
)
from dichotomy.quadrature import QuadratureSpec

SIDE_POINTS = [point(-5, 0), point(-1, 0), point(1, 0), point(5, 0)]


# -- ratios --------------------------------------------------------------------

def test_ex2_ratios_match_erf():
    rs = list(range(1, 13))
    series = condition_c_ratio_series(ex2_measure(), point(0), rs, QuadratureSpec(rel_tol=1e-9))
    for r, ratio in zip(rs, series.ratios):
        assert float(ratio) == pytest.approx(erf(r + 1) / erf(r), rel=1e-8)
    assert float(series.ratios[2]) == pytest.approx(1.000022075567401, rel=1e-9)
    assert all(float(v) >= 1 - 1e-9 for v in series.ratios)
    assert float(series.tail_limsup_estimate) <= 1 + 1e-8


def test_ex3_ratio_exact():
    series = condition_c_ratio_series(ex3_measure(), point(0, 0), list(range(2, 15)))
    assert series.ratios[8].exact == Fraction(2796621, 699391)
    assert abs(float(series.ratios[-1]) - 4) < 0.04


@pytest.mark.parametrize("r", [1, 2, 5, 9])
def test_unit_lattice_ratio(r):
    series = condition_c_ratio_series(DiscreteWeights(2, "UNIT"), point(0, 0), [r])
    assert series.ratios[0].exact == Fraction((2 * r + 1) ** 2, (2 * r - 1) ** 2)


def test_tail_max_is_max_of_tail():
    vals = [LogNumber.of(v) for v in (5, 1, 3, 2)]
    assert tail_max(vals, 0.25).exact == 2
    assert tail_max(vals, 0.5).exact == 3
    assert tail_max(vals, 1.0).exact == 5
    series = condition_c_ratio_series(ex3_measure(), point(0, 0), list(range(2, 10)), tail_fraction=0.5)
    assert series.tail_limsup_estimate == max(series.ratios[-4:])


def test_ratio_input_validation():
    with pytest.raises(ValueError):
        condition_c_ratio_series(ex3_measure(), point(0, 0), [])
    with pytest.raises(ValueError):
        condition_c_ratio_series(ex3_measure(), point(0, 0), [3, 2])


def test_ratio_serialization():
    series = condition_c_ratio_series(ex3_measure(), point(0, 0), [2, 3])
    data = json.loads(json.dumps(series.to_json()))
    assert len(data["ratios"]) == 2
    assert series.to_csv().splitlines()[0].startswith("r")


def test_ratio_limit_independent_of_base_point():
    far = condition_c_ratio_series(ex3_measure(), point(3, -2), list(range(30, 34)))
    assert abs(float(far.ratios[-1]) - 4) < 0.1


# -- classification -------------------------------------------------------------

def test_growth_slope():
    sched = [1, 2, 4, 8]
    vals = [LogNumber.of(r**2) for r in sched]
    assert growth_slope(sched, vals, 1.0) == pytest.approx(2.0)
    flat = [LogNumber.of(3)] * 4
    assert growth_slope(sched, flat) == 0.0


def test_constant_is_bounded():
    rep = classify_point(ex3_measure(), Constant(7), point(2, 2), [1, 2, 3, 4])
    assert rep.classification == Classification.BOUNDED_TREND
    assert rep.sup_observed.exact == 7


def test_ex1_origin_growth_with_long_schedule():
    sched = [2 ** (k / 2) for k in range(0, 25)]
    rep = classify_point(ex1_measure(), EX1_F, point(0), sched, threshold=1e3)
    assert rep.classification == Classification.DIVERGENT_TREND
    assert rep.growth_slope > 0.5


def test_ex1_origin_below_ten_within_eight():
    # A_r f(0) < r/2, so the cutoff 8 cannot exceed 10
    rep = classify_point(ex1_measure(), EX1_F, point(0), list(range(1, 9)), threshold=10)
    assert float(rep.sup_observed) < 4
    assert rep.classification == Classification.BOUNDED_TREND


def test_ex1_negative_point_bounded():
    rep = classify_point(ex1_measure(), EX1_F, point(-1), [2 ** (k / 2) for k in range(0, 25)])
    assert rep.classification == Classification.BOUNDED_TREND
    assert float(rep.sup_observed) < 3


def test_classification_invariant_and_determinism():
    args = (ex4_measure(), EX4_G, point(1, 0), list(range(1, 13)))
    a = classify_point(*args, threshold=1e3)
    b = classify_point(*args, threshold=1e3)
    assert a == b
    expected = a.sup_observed > 1e3 and a.growth_slope > 0
    assert (a.classification == Classification.DIVERGENT_TREND) == expected
    assert len(a.values) == len(a.schedule)
    assert all(x <= y for x, y in zip(a.values, a.values[1:]))


def test_noncentered_requires_family():
    with pytest.raises(ValueError):
        classify_point(ex3_measure(), EX3_F, point(0, 0), [1, 2], Mode.NONCENTERED)


def test_ex3_scan_noncentered():
    fam = NoncenteredDiscrete(Window.square(24), 24)
    res = dichotomy_scan(ex3_measure(), EX3_F, SIDE_POINTS, list(range(1, 25)), Mode.NONCENTERED, fam)
    assert res.verdicts == ["B", "B", "D", "D"]
    assert res.violation
    assert res.bounded_mass.exact == 2


def test_ex4_scan_centered():
    res = dichotomy_scan(ex4_measure(), EX4_G, SIDE_POINTS, list(range(1, 25)))
    assert res.verdicts == ["B", "B", "D", "D"]
    assert res.violation


def test_constant_scan_has_no_violation():
    res = dichotomy_scan(ex3_measure(), Constant(1), SIDE_POINTS, [1, 2, 3])
    assert res.verdicts == ["B"] * 4
    assert not res.violation
    text = res.to_csv()
    assert text.splitlines()[0] == "point,mode,cutoff,value,log_value,classification"
    assert json.loads(json.dumps(res.to_json()))["summary"]["bounded"] == 4


def test_scan_rejects_empty():
    with pytest.raises(ValueError):
        dichotomy_scan(ex3_measure(), EX3_F, [], [1])


# -- sector construction ----------------------------------------------------------

def test_angles_and_sectors():
    assert angle(0, 0) == 0.0
    assert angle(1, 0) == 0.0
    assert angle(0, -1) == pytest.approx(1.5 * math.pi)
    assert sector_bounds(2, 3) == (math.pi, 1.5 * math.pi)


def test_witness_on_axis_heavy_measure():
    mu = axis_heavy_measure()
    a = growth_witness_sequence(mu, 4, 40)
    assert a == [8, 10, 12, 14]
    for k, ak in enumerate(a, 1):
        # independent re-check of the growth bound
        big = ball_mass(mu, Ball(point(0, 0), ak + 1))
        small = ball_mass(mu, Ball(point(0, 0), ak))
        assert big >= small * 4**k
    assert all(b >= x + 2 for x, b in zip(a, a[1:]))


@pytest.mark.parametrize("mu", [DiscreteWeights(2, "UNIT"), ex3_measure()])
def test_witness_not_found_for_slow_growth(mu):
    with pytest.raises(WitnessNotFound) as info:
        growth_witness_sequence(mu, 4, 30)
    assert info.value.prefix == []


def test_witness_rejects_line_measures():
    with pytest.raises(ValueError):
        growth_witness_sequence(ex2_measure(), 2, 20)


def _axis_witness(mu, depth=4):
    a = growth_witness_sequence(mu, 6, 40)
    return select_sectors(mu, a, depth)


def test_sector_select_axis():
    mu = axis_heavy_measure()
    w = _axis_witness(mu)
    assert w.j == (1, 1, 1, 1)
    assert list(w.k) == sorted(set(w.k))
    assert w.phi0 == pytest.approx(math.pi / 16)
    for n, (s, b) in enumerate(zip(w.sector_masses, w.ball_masses), 1):
        assert s * 2**n >= b


def test_sector_select_mirrored():
    w = _axis_witness(mirrored(axis_heavy_measure()))
    for parent, child in zip(w.j, w.j[1:]):
        assert math.ceil(child / 2) == parent
    assert abs(w.phi0 - math.pi) < math.pi / 4


def test_sector_select_symmetric_tie_break():
    mu = DiscreteWeights(2, "UNIT")
    w = select_sectors(mu, [8, 10, 12], 1)
    assert w.j == (1,)


def test_sector_select_fails_without_mass():
    # level 2 needs a radius index beyond the one used at level 1
    mu = DiscreteWeights(2, "UNIT")
    with pytest.raises(SelectionFailed):
        select_sectors(mu, [8], 2)


def test_test_function_axis():
    mu = axis_heavy_measure()
    w = _axis_witness(mu)
    f, report = bump_test_function(mu, w, 4)
    assert report.passed
    assert [c["pass"] for c in report.lower_checks] == [True] * 4
    assert all(c["average"] >= c["bound"] for c in report.lower_checks)
    assert report.far_checks and all(c["average"] <= 2 for c in report.far_checks)
    assert len(f.bumps) == 4


def test_test_function_mirrored_and_wrong_far_point():
    mu = mirrored(axis_heavy_measure())
    w = _axis_witness(mu)
    _, report = bump_test_function(mu, w, 4)
    assert report.passed
    with pytest.raises(VerificationFailed) as info:
        bump_test_function(mu, w, 4, far_point=point(3, 0))
    assert info.value.level == 2


def test_test_function_depth_zero():
    mu = axis_heavy_measure()
    f, report = bump_test_function(mu, _axis_witness(mu), 0)
    assert f.bumps == ()
    res = centered_max_truncated(mu, f, point(0, 0), [1, 5, 20])
    assert res.sup.exact == 0
    assert report.passed


def test_corrupted_witness_fails_at_its_level():
    mu = axis_heavy_measure()
    w = _axis_witness(mu)
    a = list(w.a)
    a[w.k[2] - 1] = a[w.k[2] - 1] + 1  # no weight jump across this radius
    bad = replace(w, a=tuple(a))
    with pytest.raises(VerificationFailed) as info:
        bump_test_function(mu, bad, 4)
    assert info.value.level == 3
    assert info.value.report.witness_checks[2]["growth_ok"] is False


def test_depth_beyond_witness():
    mu = axis_heavy_measure()
    with pytest.raises(ValueError):
        bump_test_function(mu, _axis_witness(mu, 2), 3)
