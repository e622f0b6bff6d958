"""Preset bundles for the five worked examples and their claim checks.

Each claim is a single displayed inequality turned into a computation: a
``computed`` quantity, a ``bound`` and a relation.  Lattice claims are exact
(zero tolerance); continuous claims carry a relative tolerance.  Claims on
log-domain measures report ``log2`` of both sides.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .analysis import (
    Mode,
    condition_c_ratio_series,
    dichotomy_scan,
)
from .errors import DichotomyError
from .lognum import LN2, LogNumber
from .maximal import (
    NoncenteredDiscrete,
    Noncentered1D,
    Noncentered2DGrid,
    ball_average,
    geometric_endpoints,
    noncentered_max_truncated,
)
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .space import (
    EX1_F,
    EX3_F,
    EX4_G,
    Ball,
    LatticeSums,
    Measure,
    MetricKind,
    Point,
    StripSteps,
    TestFunction,
    Window,
    ball_integral,
    ball_mass,
    ex1_measure,
    ex2_measure,
    ex3_measure,
    ex4_measure,
    ex5_measure,
    point,
)

CONTINUOUS_TOL = 1e-6


class ClaimKind:
    LOWER_BOUND = "LOWER_BOUND"
    UPPER_BOUND = "UPPER_BOUND"
    RATIO_LIMIT = "RATIO_LIMIT"
    TREND = "TREND"


@dataclass(frozen=True)
class Outcome:
    """One evaluated instance of a claim, before formatting."""

    computed: LogNumber
    bound: LogNumber
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ClaimSpec:
    name: str
    description: str
    kind: str
    relation: str  # ">=", "<=" or "within"
    param: str
    default_range: tuple
    evaluate: Callable  # (preset, value, q) -> Outcome
    log_domain: bool = False
    tolerance: float = 0.0  # relative; absolute for "within"


@dataclass(frozen=True)
class ClaimReport:
    example: str
    claim: str
    params: dict
    computed: float | None
    bound: float | None
    relation: str
    passed: bool
    log_domain: bool
    margin: float | None = None
    tolerance: float = 0.0
    exact: str | None = None
    error: str | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "example": self.example,
            "claim": self.claim,
            "params": self.params,
            "computed": self.computed,
            "bound": self.bound,
            "relation": self.relation,
            "pass": self.passed,
            "log_domain": self.log_domain,
            "margin": self.margin,
            "tolerance": self.tolerance,
        }
        if self.exact is not None:
            out["exact"] = self.exact
        if self.error is not None:
            out["error"] = self.error
        if self.extra:
            out["extra"] = self.extra
        return out


@dataclass(frozen=True)
class ExamplePreset:
    id: str
    dim: int
    metric: MetricKind
    measure: Measure
    function: TestFunction
    claims: tuple
    description: str = ""
    second_function: TestFunction | None = None


# -- comparison helpers ----------------------------------------------------------------

def _holds(spec: ClaimSpec, out: Outcome) -> bool:
    c, b, tol = out.computed, out.bound, spec.tolerance
    if spec.relation == "within":
        return abs(float(c) - float(b)) <= tol
    if spec.relation == ">=":
        if tol == 0:
            return c >= b
        return c.log >= b.log + math.log1p(-tol) or c >= b
    if tol == 0:
        return c <= b
    return c.log <= b.log + math.log1p(tol) or c <= b


def _report(example: str, spec: ClaimSpec, value, out: Outcome) -> ClaimReport:
    passed = _holds(spec, out)
    if spec.log_domain:
        computed, bound = out.computed.log2, out.bound.log2
        margin = computed - bound if spec.relation == ">=" else bound - computed
    else:
        computed, bound = float(out.computed), float(out.bound)
        if spec.relation == ">=":
            margin = computed - bound
        elif spec.relation == "<=":
            margin = bound - computed
        else:
            margin = spec.tolerance - abs(computed - bound)
    exact = None
    if out.computed.is_exact and out.bound.is_exact and not spec.log_domain:
        diff = out.computed.exact - out.bound.exact
        exact_margin = diff if spec.relation == ">=" else -diff
        exact = f"{out.computed.exact} {spec.relation} {out.bound.exact} (margin {exact_margin})"
        if len(exact) > 400:
            exact = None
    return ClaimReport(
        example, spec.name, {spec.param: _jsonable(value)}, computed, bound, spec.relation,
        passed, spec.log_domain, margin, spec.tolerance, exact, None, dict(out.extra),
    )


def _jsonable(value):
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    return value


def run_claims(
    preset: ExamplePreset,
    params: dict | None = None,
    q: QuadratureSpec = DEFAULT_SPEC,
    only: Sequence[str] | None = None,
) -> list[ClaimReport]:
    """Evaluate every claim of ``preset`` over its parameter range.

    ``params`` maps a claim name (or its parameter name) to the values to use.
    Evaluation errors are recorded as failed reports; the batch continues.
    """
    params = params or {}
    reports = []
    for spec in preset.claims:
        if only and spec.name not in only:
            continue
        values = params.get(spec.name, params.get(spec.param, spec.default_range))
        for value in values:
            try:
                out = spec.evaluate(preset, value, q)
                reports.append(_report(preset.id, spec, value, out))
            except (DichotomyError, ValueError, ArithmeticError) as exc:
                reports.append(
                    ClaimReport(
                        preset.id, spec.name, {spec.param: _jsonable(value)}, None, None,
                        spec.relation, False, spec.log_domain, None, spec.tolerance,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
    return reports


# -- EX1: e^{x^2} on the line ------------------------------------------------------

def _interval(a, b) -> Ball:
    return Ball(point(Fraction(a + b) / 2, lattice=False), Fraction(b - a) / 2)


def _centered(x, r) -> Ball:
    return Ball(point(x, lattice=False), r)


def ex1_r0(mu, N: int, q: QuadratureSpec, step=Fraction(1, 8), span: int = 6) -> tuple:
    """First schedule radius from which ``mu((N, r)) >= mu((-r, r)) / 3`` holds."""
    schedule = [N + step * k for k in range(1, int(span / step) + 1)]
    ok = [ball_mass(mu, _interval(N, r), q) * 3 >= ball_mass(mu, _centered(0, r), q) for r in schedule]
    r0_index = None
    for i in range(len(ok) - 1, -1, -1):
        if not ok[i]:
            break
        r0_index = i
    if r0_index is None:
        raise ValueError(f"no r0 found for N={N} within span {span}")
    return schedule[r0_index], schedule[r0_index:]


def _ex1_growth(preset, N, q):
    mu, f = preset.measure, preset.function
    r0, tail = ex1_r0(mu, N, q)
    averages = [ball_average(mu, f, _centered(0, r), q).average for r in tail]
    low = min(averages)
    return Outcome(low, LogNumber.of(Fraction(N, 3)), {"r0": float(r0), "radii_checked": len(tail)})


def _ex1_shift(preset, xr, q):
    x, r = xr
    mu, f = preset.measure, preset.function
    lhs = ball_average(mu, f, _centered(x, r), q).average
    rhs = ball_average(mu, f, _centered(0, r + x), q).average
    return Outcome(lhs, rhs)


def ex1_negative_r0(x, step=Fraction(1, 8)) -> Fraction:
    """Smallest ``r > |x|`` on a ``step`` grid with ``(x+r)^2 <= log(2|x|) + r^2``.

    ``(x+r)^2 - r^2`` decreases in ``r`` for ``x < 0``, so the inequality
    then holds for every larger ``r``.
    """
    x = Fraction(x)
    if x >= 0:
        raise ValueError("needs a negative point")
    r = abs(x) + step
    while (x + r) ** 2 - r**2 > math.log(2 * abs(x)):
        r += step
    return r


def _ex1_exp_inequality(preset, x, q):
    r0 = ex1_negative_r0(x)
    radii = [r0 + k * Fraction(1, 2) for k in range(9)]
    worst = max(radii, key=lambda r: float((x + r) ** 2 - r * r))
    lhs = LogNumber.from_log(float((x + worst) ** 2))
    rhs = LogNumber.from_log(math.log(2 * abs(x)) + float(worst) ** 2)
    return Outcome(lhs, rhs, {"r0": float(r0)})


def _ex1_small_cap(preset, x, q):
    mu, f = preset.measure, preset.function
    r0 = ex1_negative_r0(x)
    radii = [r0 * k / 16 for k in range(1, 16)]
    best = max(ball_average(mu, f, _centered(x, r), q).average for r in radii)
    cap = LogNumber.of(max(Fraction(0), x + r0))
    return Outcome(best, cap, {"r0": float(r0)})


def _ex1_chain(preset, x, q):
    """Worst ratio of ``A_r f(x)`` to ``e^{(x+r)^2} / (2 mu((x-r, -r)))``."""
    mu, f = preset.measure, preset.function
    r0 = ex1_negative_r0(x)
    worst = None
    for k in range(9):
        r = r0 + k * Fraction(1, 2)
        avg = ball_average(mu, f, _centered(x, r), q).average
        chain = LogNumber.from_log(float((x + r) ** 2) - LN2) / ball_mass(mu, _interval(x - r, -r), q)
        ratio = avg / chain
        if worst is None or ratio > worst:
            worst = ratio
    return Outcome(worst, LogNumber.of(1), {"r0": float(r0)})


def _ex1_large_cap(preset, x, q):
    mu, f = preset.measure, preset.function
    r0 = ex1_negative_r0(x)
    radii = [r0 + k * Fraction(1, 2) for k in range(9)] + [r0 + 2**k for k in range(3, 9)]
    best = max(ball_average(mu, f, _centered(x, r), q).average for r in radii)
    return Outcome(best, LogNumber.of(1), {"r0": float(r0)})


EX1_CLAIMS = (
    ClaimSpec("ex1.centered_growth", "A_r f(0) >= N/3 for every scanned r >= r0(N)",
              ClaimKind.LOWER_BOUND, ">=", "N", (1, 2, 3, 4, 5, 6), _ex1_growth, True, CONTINUOUS_TOL),
    ClaimSpec("ex1.shift", "A_r f(x) >= A_{r+x} f(0) for x > 0, r >= x",
              ClaimKind.LOWER_BOUND, ">=", "x,r",
              ((0.5, 0.5), (0.5, 3), (1, 1), (1, 4), (2, 2), (2, 6)), _ex1_shift, True, CONTINUOUS_TOL),
    ClaimSpec("ex1.exp_inequality", "e^{(x+r)^2} <= 2|x| e^{r^2} for r >= r0(x)",
              ClaimKind.UPPER_BOUND, "<=", "x", (-0.5, -1, -2, -5), _ex1_exp_inequality, True, 0.0),
    ClaimSpec("ex1.small_radius_cap", "A_r f(x) <= f(x + r0) for r < r0",
              ClaimKind.UPPER_BOUND, "<=", "x", (-0.5, -1, -2, -5), _ex1_small_cap, True, CONTINUOUS_TOL),
    ClaimSpec("ex1.average_chain", "A_r f(x) <= e^{(x+r)^2} / (2 mu((x-r, -r))) for r >= r0",
              ClaimKind.UPPER_BOUND, "<=", "x", (-0.5, -1, -2, -5), _ex1_chain, True, CONTINUOUS_TOL),
    ClaimSpec("ex1.large_radius_cap", "A_r f(x) <= 1 for r >= r0",
              ClaimKind.UPPER_BOUND, "<=", "x", (-0.5, -1, -2, -5), _ex1_large_cap, True, CONTINUOUS_TOL),
)


# -- EX2: e^{-x^2} on the line ------------------------------------------------------

def _ratio_at(mu, center, r, q):
    series = condition_c_ratio_series(mu, center, [r], q)
    return series.ratios[0]


def _ex2_ratio(preset, r, q):
    return Outcome(_ratio_at(preset.measure, point(0), r, q), LogNumber.of(1))


EX2_CLAIMS = (
    ClaimSpec("ex2.ratio_limit", "mu(B_{r+1}(0)) / mu(B_r(0)) -> 1",
              ClaimKind.RATIO_LIMIT, "within", "r", tuple(range(3, 13)), _ex2_ratio, False, 1e-4),
)


# -- EX3 and EX4: weighted Z^2 with the sup metric ----------------------------------------

def _ex3_ratio(preset, r, q):
    return Outcome(_ratio_at(preset.measure, point(0, 0), r, q), LogNumber.of(4))


def _ex3_lower(preset, N, q):
    rec = ball_average(preset.measure, preset.function, Ball(point(N, 0), N, MetricKind.SUPREMUM), q)
    return Outcome(rec.average, LogNumber.of(Fraction(2**N, (2 * N - 1) ** 2)))


def ex3_left_chain(window: int) -> dict:
    """Every sup-metric ball containing ``(-1, 0)`` with center in the window.

    Checks the per-ball bound ``avg <= 2 f(K,0) / 4^{floor(K/2)}`` (``avg = 0``
    when ``K <= 0``), where ``K`` is the largest ``n`` with ``(n, 0)`` in the
    ball.  Returns the number of balls and of chain violations.
    """
    mu, f = ex3_measure(), EX3_F
    sums = LatticeSums(mu, f, Window.square(2 * window, 2))
    balls = violations = 0
    for r in [Fraction(1, 2)] + list(range(1, window + 1)):
        k = math.ceil(r) - 1
        for cn in range(max(-window, -1 - k), min(window, -1 + k) + 1):
            for cm in range(max(-window, -k), min(window, k) + 1):
                mass, integral = sums.box(cn - k, cn + k, cm - k, cm + k)
                balls += 1
                K = cn + k
                if K <= 0:
                    ok = integral == 0
                else:
                    ok = integral * 4 ** (K // 2) <= 2 * 2**K * mass
                violations += not ok
    return {"balls": balls, "chain_violations": violations}


def _ex3_left(preset, window, q):
    fam = NoncenteredDiscrete(Window.square(window, 2), window, MetricKind.SUPREMUM)
    res = noncentered_max_truncated(preset.measure, preset.function, point(-1, 0), fam, q)
    chain = ex3_left_chain(window)
    computed = res.sup
    if chain["chain_violations"]:
        computed = LogNumber.from_log(math.inf)  # any broken link fails the claim
    return Outcome(computed, LogNumber.of(4), {**chain, "argmax": res.argmax.to_json()})


EX3_CLAIMS = (
    ClaimSpec("ex3.ratio_limit", "mu(B_{r+1}(0,0)) / mu(B_r(0,0)) -> 4",
              ClaimKind.RATIO_LIMIT, "within", "r", (10, 11, 12, 13, 14), _ex3_ratio, False, 0.04),
    ClaimSpec("ex3.right_lower_bound", "average of f over B_N(N,0) >= 2^N / (2N-1)^2",
              ClaimKind.LOWER_BOUND, ">=", "N", tuple(range(2, 13)), _ex3_lower, False, 0.0),
    ClaimSpec("ex3.left_upper_bound",
              "balls containing (-1,0): average <= 2 f(K,0) / 4^{floor(K/2)} <= 4",
              ClaimKind.UPPER_BOUND, "<=", "window", (40,), _ex3_left, False, 0.0),
)


def _ex4_lower(preset, N, q):
    rec = ball_average(preset.measure, preset.second_function, Ball(point(1, 0), N, MetricKind.SUPREMUM), q)
    return Outcome(rec.average, LogNumber.of(2 ** (N * N - (N - 2) ** 2 - 1)))


def _ex4_upper(preset, N, q):
    rec = ball_average(preset.measure, preset.second_function, Ball(point(-1, 0), N, MetricKind.SUPREMUM), q)
    return Outcome(rec.average, LogNumber.of(Fraction(1, 2 ** (N * N - (N - 2) ** 2 - 1))))


EX4_CLAIMS = (
    ClaimSpec("ex4.right_lower_bound", "average of g over B_N(1,0) >= 2^{N^2-(N-2)^2-1}",
              ClaimKind.LOWER_BOUND, ">=", "N", tuple(range(5, 13)), _ex4_lower, True, 0.0),
    ClaimSpec("ex4.left_upper_bound", "average of g over B_N(-1,0) <= 2^{-N^2+(N-2)^2+1}",
              ClaimKind.UPPER_BOUND, "<=", "N", tuple(range(5, 13)), _ex4_upper, True, 0.0),
)


# -- EX5: segment plus plane -----------------------------------------------------------------

@dataclass(frozen=True)
class StripIndicator(TestFunction):
    """Indicator of ``[0,1] x (2**-n**2, 2**(1-n**2))``."""

    n: int = 1
    name = "STRIP"
    dim = 2

    def values(self, x):
        lo, hi = 2.0 ** (-self.n**2), 2.0 ** (1 - self.n**2)
        inside = (x[:, 0] >= 0) & (x[:, 0] <= 1) & (x[:, 1] > lo) & (x[:, 1] < hi)
        return inside.astype(float)

    def breaks(self, axis):
        if axis == 0:
            return (0.0, 1.0)
        return (2.0 ** (-self.n**2), 2.0 ** (1 - self.n**2))


def ex5_ball(n: int, eta: Fraction, x0=Fraction(1, 2)) -> Ball:
    """``B_{2^{-n^2+eps}}(x0, 2^{-n^2})`` with ``2^eps = 1 + eta`` kept exact."""
    u = Fraction(1, 2 ** (n * n))
    return Ball(point(x0, u, lattice=False), u * (1 + eta))


def ex5_epsilon(mu, n: int, q: QuadratureSpec, x0=Fraction(1, 2), tol: float = 1e-12) -> dict:
    """Pick ``eps_n > 0`` with ``mu(B_n) <= 2^{-2n^2+2}`` and re-verify it.

    Bisection runs on ``log2(2^eps - 1)``: the admissible ``eps_n`` is about
    ``1e-23`` at ``n = 6``, far below any absolute tolerance on ``eps``
    itself.  The result is halved once for a safety margin over quadrature
    error, then the mass is recomputed independently.
    """
    target = LogNumber.of(Fraction(4, 2 ** (2 * n * n)))

    def fits(log2_eta: float) -> bool:
        return ball_mass(mu, ex5_ball(n, Fraction(2.0**log2_eta), x0), q) <= target

    lo, hi = -1000.0, 0.0
    if not fits(lo):
        raise ValueError(f"no admissible epsilon for n={n}")
    if fits(hi):
        lo = hi
    else:
        while hi - lo > tol * max(1.0, abs(lo)):
            mid = 0.5 * (lo + hi)
            if fits(mid):
                lo = mid
            else:
                hi = mid
    eta = Fraction(2.0 ** (lo - 1))
    mass = ball_mass(mu, ex5_ball(n, eta, x0), q)
    return {
        "eta": eta,
        "epsilon": math.log1p(float(eta)) / LN2,
        "log2_epsilon": (lo - 1) - math.log2(LN2) + math.log2(math.log1p(float(eta)) / float(eta)),
        "mass": mass,
        "target": target,
    }


_EPS_CACHE: dict = {}


def _cached_epsilon(mu, n, q) -> dict:
    key = (id(mu), n, q)
    hit = _EPS_CACHE.get(key)
    if hit is None or hit[0] is not mu:
        hit = (mu, ex5_epsilon(mu, n, q))
        _EPS_CACHE[key] = hit
    return hit[1]


def _ex5_eps(preset, n, q):
    info = _cached_epsilon(preset.measure, n, q)
    return Outcome(info["mass"], info["target"], {"epsilon": info["epsilon"], "log2_epsilon": info["log2_epsilon"]})


def _ex5_strip(preset, n, q):
    info = _cached_epsilon(preset.measure, n, q)
    b = ex5_ball(n, info["eta"])
    inter = ball_integral(preset.measure, StripIndicator(n), b, q)
    return Outcome(inter, LogNumber.of(Fraction(1, 2 ** (2 * n * n + 1))), {"epsilon": info["epsilon"]})


def _ex5_average(preset, n, q):
    info = _cached_epsilon(preset.measure, n, q)
    rec = ball_average(preset.measure, preset.function, ex5_ball(n, info["eta"]), q)
    return Outcome(rec.average, LogNumber.of(Fraction(2 ** n, 8)), {"epsilon": info["epsilon"]})


def _ex5_norm(preset, depth, q):
    f = StripSteps(depth)
    total = ball_integral(preset.measure, f, Ball(point(Fraction(1, 2), Fraction(1, 2), lattice=False),
                                                   Fraction(3, 4), MetricKind.SUPREMUM), q)
    return Outcome(total, LogNumber.of(2), {"series_value": f.l1_norm()})


def ex5_off_segment(preset, p=(0.5, 0.5), eps: float = 0.25, q: QuadratureSpec = DEFAULT_SPEC) -> dict:
    """Truncated non-centered value at ``p`` and the cap ``max(L, 2/lambda2(B_{eps/2}))``."""
    x = point(*p, lattice=False)
    f = preset.function
    L = f.sup_near(x, eps)
    cap = max(L, 2.0 / (math.pi * (eps / 2) ** 2))
    fam = Noncentered2DGrid(0.25, (0.0, 0.0), (1.0, 1.0), (0.125, 0.25, 0.5, 1.0, 2.0))
    res = noncentered_max_truncated(preset.measure, f, x, fam, q)
    return {"value": res.sup, "cap": cap, "L": L, "argmax": res.argmax.to_json()}


def _ex5_bounded(preset, p, q):
    info = ex5_off_segment(preset, p, q=q)
    return Outcome(info["value"], LogNumber.of(info["cap"]), {"L": info["L"], "argmax": info["argmax"]})


EX5_CLAIMS = (
    ClaimSpec("ex5.epsilon_constraint", "mu(B_n) <= 2^{-2n^2+2} for the recorded eps_n",
              ClaimKind.UPPER_BOUND, "<=", "n", (2, 3, 4, 5, 6), _ex5_eps, True, CONTINUOUS_TOL),
    ClaimSpec("ex5.strip_mass", "mu(B_n intersect S_n) >= 2^{-2n^2-1}",
              ClaimKind.LOWER_BOUND, ">=", "n", (2, 3, 4, 5, 6), _ex5_strip, True, CONTINUOUS_TOL),
    ClaimSpec("ex5.segment_average", "average of f over B_n >= 2^{n-3}",
              ClaimKind.LOWER_BOUND, ">=", "n", (2, 3, 4, 5, 6), _ex5_average, True, CONTINUOUS_TOL),
    ClaimSpec("ex5.l1_norm", "||f||_1 <= 2", ClaimKind.UPPER_BOUND, "<=", "depth", (8,),
              _ex5_norm, False, CONTINUOUS_TOL),
    ClaimSpec("ex5.off_segment_bound", "M f(x0,y0) <= max{L, 2 / lambda2(B_{eps/2}(x0,y0))}",
              ClaimKind.UPPER_BOUND, "<=", "point", ((0.5, 0.5),), _ex5_bounded, False, CONTINUOUS_TOL),
)


# -- presets ---------------------------------------------------------------------------------

def load_preset(preset_id: str, depth: int = 8) -> ExamplePreset:
    key = preset_id.upper()
    if key == "EX1":
        return ExamplePreset("EX1", 1, MetricKind.EUCLIDEAN, ex1_measure(), EX1_F, EX1_CLAIMS,
                             "R with e^{x^2} dx, f(x) = x for x > 0")
    if key == "EX2":
        return ExamplePreset("EX2", 1, MetricKind.EUCLIDEAN, ex2_measure(), EX1_F, EX2_CLAIMS,
                             "R with e^{-x^2} dx")
    if key == "EX3":
        return ExamplePreset("EX3", 2, MetricKind.SUPREMUM, ex3_measure(), EX3_F, EX3_CLAIMS,
                             "Z^2, sup metric, weight 4^{|m|} on the column n = 0")
    if key == "EX4":
        return ExamplePreset("EX4", 2, MetricKind.SUPREMUM, ex4_measure(), EX3_F, EX4_CLAIMS,
                             "Z^2, sup metric, column weight 4^{|m|}, 2^{n^2} on the negative axis",
                             second_function=EX4_G)
    if key == "EX5":
        return ExamplePreset("EX5", 2, MetricKind.EUCLIDEAN, ex5_measure(), StripSteps(depth), EX5_CLAIMS,
                             "R^2, Lebesgue plus length on [0,1] x {0}")
    raise ValueError(f"unknown example {preset_id!r}; expected EX1..EX5")


# -- the summary matrix -----------------------------------------------------------------------

LINE_POINTS = (-5, -2, -1, 0, 1, 2, 5)
LATTICE_POINTS = ((1, 0), (-1, 0), (5, 0), (-5, 0), (0, 1), (0, -1), (1, 1), (-1, -1))
EXPECTED_VERDICTS = {
    "EX1": (True, False),
    "EX2": (True, True),
    "EX3": (False, True),
    "EX4": (False, False),
}


@dataclass(frozen=True)
class VerdictCell:
    example: str
    operator: str  # "M" or "Mc"
    has_dp: bool
    expected: bool
    verdicts: tuple
    points: tuple

    @property
    def matches(self) -> bool:
        return self.has_dp == self.expected


@dataclass(frozen=True)
class VerdictMatrix:
    cells: tuple
    threshold: float
    seconds: float

    @property
    def matches(self) -> bool:
        return all(c.matches for c in self.cells)

    def matrix(self) -> dict:
        out: dict = {}
        for c in self.cells:
            out.setdefault(c.example, {})[c.operator] = c.has_dp
        return out

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": "verdict_matrix",
            "threshold": self.threshold,
            "matches_expected": self.matches,
            "cells": [
                {
                    "example": c.example,
                    "operator": c.operator,
                    "dichotomy_on_sample": c.has_dp,
                    "expected": c.expected,
                    "matches": c.matches,
                    "points": [list(p) for p in c.points],
                    "verdicts": list(c.verdicts),
                }
                for c in self.cells
            ],
        }

    def to_table(self) -> str:
        mark = {True: "yes", False: "no"}
        lines = [f"{'':6} {'DP for M':>10} {'DP for Mc':>10}"]
        m = self.matrix()
        for ex in EXPECTED_VERDICTS:
            row = m.get(ex, {})
            lines.append(f"{ex:6} {mark.get(row.get('M'), '?'):>10} {mark.get(row.get('Mc'), '?'):>10}")
        lines.append(f"matches expected pattern: {mark[self.matches]}")
        return "\n".join(lines)


def _line_family(x: Point):
    return Noncentered1D(geometric_endpoints(float(x[0]), 0.25, 4096.0, 14))


LINE_SCHEDULE = tuple(2.0 ** (k / 2) for k in range(0, 25))
LATTICE_WINDOW = 24


def summarize_verdicts(
    q: QuadratureSpec = DEFAULT_SPEC, threshold: float = 1e3, examples: Sequence[str] = tuple(EXPECTED_VERDICTS)
) -> VerdictMatrix:
    """Sampled dichotomy verdicts for each example and operator."""
    start = time.perf_counter()
    cells = []
    lattice_schedule = [Fraction(1, 2)] + list(range(1, LATTICE_WINDOW + 1))
    lattice_fam = NoncenteredDiscrete(Window.square(LATTICE_WINDOW, 2), LATTICE_WINDOW, MetricKind.SUPREMUM)
    for ex in examples:
        preset = load_preset(ex)
        if preset.dim == 1:
            pts = [point(x, lattice=False) for x in LINE_POINTS]
            runs = {
                "M": (preset.function, Mode.NONCENTERED, _line_family, LINE_SCHEDULE),
                "Mc": (preset.function, Mode.CENTERED, None, LINE_SCHEDULE),
            }
        else:
            pts = [point(*p) for p in LATTICE_POINTS]
            centered_f = preset.second_function or preset.function
            runs = {
                "M": (preset.function, Mode.NONCENTERED, lattice_fam, lattice_schedule),
                "Mc": (centered_f, Mode.CENTERED, None, lattice_schedule),
            }
        for op, (f, mode, fam, schedule) in runs.items():
            scan = dichotomy_scan(preset.measure, f, pts, schedule, mode, fam, threshold, q)
            cells.append(
                VerdictCell(ex, op, not scan.violation, EXPECTED_VERDICTS[ex][op == "Mc"],
                           tuple(scan.verdicts), tuple(tuple(float(c) for c in p) for p in pts))
            )
    return VerdictMatrix(tuple(cells), threshold, time.perf_counter() - start)
