"""Ball averages and truncated maximal functions.

Every supremum here is over a finite ball family, so it is a lower bound for
the true maximal function.  Lattice families are evaluated exactly; the fast
path uses prefix sums, and :func:`brute_force_discrete_max` re-derives the
same supremum by naive enumeration as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import EmptyFamily
from .lognum import LogNumber
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .space import (
    Ball,
    DiscreteWeights,
    LatticeSums,
    Measure,
    MetricKind,
    Oscillation,
    Point,
    TestFunction,
    Window,
    ball_contains,
    ball_integral,
    ball_mass,
    lattice_points_in_ball,
    measure_log_domain,
    point,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class AverageRecord:
    ball: Ball
    mass: LogNumber
    integral: LogNumber
    average: LogNumber
    log_domain: bool = False

    def to_json(self) -> dict:
        return {
            "ball": self.ball.to_json(),
            "mass": self.mass.to_json(),
            "integral": self.integral.to_json(),
            "average": self.average.to_json(),
            "log_domain": self.log_domain,
        }


def ball_average(
    mu: Measure, f: TestFunction, b: Ball, q: QuadratureSpec = DEFAULT_SPEC
) -> AverageRecord:
    mass = ball_mass(mu, b, q)
    integral = ball_integral(mu, f, b, q)
    return AverageRecord(b, mass, integral, integral / mass, _log_flag(mu, q))


def _log_flag(mu: Measure, q: QuadratureSpec) -> bool:
    return q.log_domain or measure_log_domain(mu)


# -- ball families -------------------------------------------------------------

@dataclass(frozen=True)
class Centered:
    radii: tuple
    metric: MetricKind = MetricKind.EUCLIDEAN

    def balls(self, x: Point) -> Iterator[Ball]:
        for r in self.radii:
            yield Ball(x, r, self.metric)


@dataclass(frozen=True)
class NoncenteredDiscrete:
    """All lattice-centered balls with center in ``window`` and canonical radius.

    Canonical radii are ``1/2, 1, 2, ..., max_radius``: on the lattice every
    open ball with a lattice center equals one of these.
    """

    window: Window
    max_radius: int
    metric: MetricKind = MetricKind.SUPREMUM

    @property
    def radii(self) -> list:
        return [HALF] + list(range(1, self.max_radius + 1))

    def balls(self, x: Point) -> Iterator[Ball]:
        for r in self.radii:
            for c in self.window.points():
                b = Ball(Point(c, True), r, self.metric)
                if ball_contains(b, x):
                    yield b


@dataclass(frozen=True)
class Noncentered1D:
    """Intervals ``(a, b)`` with both endpoints on a grid and ``a < x < b``."""

    endpoints: tuple

    def balls(self, x: Point) -> Iterator[Ball]:
        x0 = float(x[0])
        left = sorted(e for e in self.endpoints if e < x0)
        right = sorted(e for e in self.endpoints if e > x0)
        balls = [
            Ball(point(0.5 * (a + b), lattice=False), 0.5 * (b - a)) for a in left for b in right
        ]
        balls.sort(key=lambda b: (b.radius, b.center.coords))
        return iter(balls)


def geometric_endpoints(x: float, inner: float, outer: float, count: int) -> tuple:
    """Endpoints ``x -/+ d`` with ``d`` geometric from ``inner`` to ``outer``."""
    if count < 2:
        dists = [inner]
    else:
        ratio = (outer / inner) ** (1.0 / (count - 1))
        dists = [inner * ratio**k for k in range(count)]
    return tuple(sorted({x - d for d in dists} | {x + d for d in dists}))


@dataclass(frozen=True)
class Noncentered2DGrid:
    """Balls with centers on a square grid inside a real box; lower bounds only."""

    spacing: float
    lo: tuple
    hi: tuple
    radii: tuple
    metric: MetricKind = MetricKind.EUCLIDEAN

    def centers(self) -> list:
        nx = int(math.floor((self.hi[0] - self.lo[0]) / self.spacing + 1e-9)) + 1
        ny = int(math.floor((self.hi[1] - self.lo[1]) / self.spacing + 1e-9)) + 1
        return [
            (self.lo[0] + i * self.spacing, self.lo[1] + j * self.spacing)
            for i in range(nx)
            for j in range(ny)
        ]

    def balls(self, x: Point) -> Iterator[Ball]:
        for r in sorted(self.radii):
            for c in self.centers():
                b = Ball(point(*c, lattice=False), r, self.metric)
                if ball_contains(b, x):
                    yield b


BallFamily = Centered | NoncenteredDiscrete | Noncentered1D | Noncentered2DGrid


# -- centered ------------------------------------------------------------------

@dataclass(frozen=True)
class CenteredResult:
    sup: LogNumber
    argmax_radius: object
    records: tuple

    def to_json(self) -> dict:
        return {
            "sup": self.sup.to_json(),
            "argmax_radius": float(self.argmax_radius),
            "records": [r.to_json() for r in self.records],
        }


def _exact_lattice(mu: Measure, f: TestFunction) -> bool:
    if not isinstance(mu, DiscreteWeights) or not mu.exact:
        return False
    return True


def _sums_window(balls: Sequence[Ball]) -> Window:
    dim = balls[0].dim
    lo = [math.inf] * dim
    hi = [-math.inf] * dim
    for b in balls:
        for i, c in enumerate(b.center):
            lo[i] = min(lo[i], math.floor(c - b.radius))
            hi[i] = max(hi[i], math.ceil(c + b.radius))
    return Window(tuple(int(v) for v in lo), tuple(int(v) for v in hi))


def _fast_lattice_records(mu, f, balls, q) -> list[AverageRecord] | None:
    """Exact records through prefix sums, or None when values are not exact."""
    if not _exact_lattice(mu, f):
        return None
    try:
        sums = LatticeSums(mu, f, _sums_window(balls))
    except ValueError:
        return None
    out = []
    for b in balls:
        mass, integral = sums.ball(b)
        mass_n, int_n = LogNumber.of(mass), LogNumber.of(integral)
        if mass_n.is_zero:
            mass_n = ball_mass(mu, b, q)  # raises EmptyBall
        out.append(AverageRecord(b, mass_n, int_n, int_n / mass_n, _log_flag(mu, q)))
    return out


def _records(mu, f, balls, q) -> list[AverageRecord]:
    if not balls:
        return []
    fast = _fast_lattice_records(mu, f, balls, q) if len(balls) > 1 else None
    if fast is not None:
        return fast
    return [ball_average(mu, f, b, q) for b in balls]


def centered_max_truncated(
    mu: Measure,
    f: TestFunction,
    x: Point,
    radii: Sequence,
    q: QuadratureSpec = DEFAULT_SPEC,
    metric: MetricKind | None = None,
) -> CenteredResult:
    """``max_r A_r f(x)`` over an increasing radius list; ties go to the smaller r."""
    radii = list(radii)
    if not radii:
        raise EmptyFamily("empty radius list")
    if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly increasing")
    metric = metric or default_metric(mu)
    records = _records(mu, f, [Ball(x, r, metric) for r in radii], q)
    best = records[0]
    for rec in records[1:]:
        if rec.average > best.average:
            best = rec
    return CenteredResult(best.average, best.ball.radius, tuple(records))


def default_metric(mu: Measure) -> MetricKind:
    """Sup metric for the lattice examples, Euclidean for the continuous ones."""
    if isinstance(mu, DiscreteWeights) and mu.dim == 2:
        return MetricKind.SUPREMUM
    return MetricKind.EUCLIDEAN


# -- non-centered ----------------------------------------------------------------

@dataclass(frozen=True)
class NoncenteredResult:
    sup: LogNumber
    argmax: Ball
    evaluated: int

    def to_json(self) -> dict:
        return {"sup": self.sup.to_json(), "argmax": self.argmax.to_json(), "evaluated": self.evaluated}


def _sorted_balls(fam, x: Point) -> list[Ball]:
    balls = list(fam.balls(x))
    balls.sort(key=lambda b: (b.radius, tuple(b.center.coords)))
    return balls


def _discrete_sweep(mu: DiscreteWeights, f: TestFunction, x: Point, fam: NoncenteredDiscrete):
    """Per-radius exact best ``(integral, mass, ball)`` via prefix sums.

    Returns ``None`` when weights or values are not exact rationals.
    """
    if not _exact_lattice(mu, f):
        return None
    R = fam.max_radius
    grown = Window(tuple(l - R for l in fam.window.lo), tuple(h + R for h in fam.window.hi))
    try:
        sums = LatticeSums(mu, f, grown)
    except ValueError:
        return None
    xs = x.coords
    per_radius = []
    sup_metric = fam.metric == MetricKind.SUPREMUM
    for r in fam.radii:
        best = None
        # lattice centers c with d(c, x) < r; k is the largest integer offset < r
        k = math.ceil(r) - 1
        ranges = [
            range(max(wl, math.floor(xc - r) + 1), min(wh, math.ceil(xc + r) - 1) + 1)
            for xc, wl, wh in zip(xs, fam.window.lo, fam.window.hi)
        ]
        centers = (
            [(c,) for c in ranges[0]]
            if len(ranges) == 1
            else [(a, b) for a in ranges[0] for b in ranges[1]]
        )
        for c in centers:
            if sup_metric or len(c) == 1:
                if any(abs(xc - cc) >= r for xc, cc in zip(xs, c)):
                    continue
                if len(c) == 1:
                    mass, integral = sums.box(c[0] - k, c[0] + k)
                else:
                    mass, integral = sums.box(c[0] - k, c[0] + k, c[1] - k, c[1] + k)
                ball = None
            else:
                ball = Ball(Point(c, True), r, fam.metric)
                if not ball_contains(ball, x):
                    continue
                mass, integral = sums.ball(ball)
            if best is None or integral * best[1] > best[0] * mass:
                best = (integral, mass, ball or Ball(Point(c, True), r, fam.metric))
        if best is not None:
            per_radius.append((r, best))
    return per_radius


def noncentered_by_radius(
    mu: Measure, f: TestFunction, x: Point, fam, q: QuadratureSpec = DEFAULT_SPEC
) -> list[tuple]:
    """``[(radius, AverageRecord)]``: the best ball of each radius, increasing."""
    if isinstance(fam, NoncenteredDiscrete) and isinstance(mu, DiscreteWeights):
        sweep = _discrete_sweep(mu, f, x, fam)
        if sweep is not None:
            out = []
            for r, (integral, mass, ball) in sweep:
                m, i = LogNumber.of(mass), LogNumber.of(integral)
                out.append((r, AverageRecord(ball, m, i, i / m, _log_flag(mu, q))))
            return out
    balls = _sorted_balls(fam, x)
    out: dict = {}
    order = []
    for b in balls:
        rec = ball_average(mu, f, b, q)
        cur = out.get(b.radius)
        if cur is None:
            order.append(b.radius)
            out[b.radius] = rec
        elif rec.average > cur.average:
            out[b.radius] = rec
    return [(r, out[r]) for r in order]


def noncentered_max_truncated(
    mu: Measure, f: TestFunction, x: Point, fam, q: QuadratureSpec = DEFAULT_SPEC
) -> NoncenteredResult:
    """Sup of ball averages over the family members containing ``x``.

    Ties go to the smallest radius, then the lexicographically smallest center.
    """
    per_radius = noncentered_by_radius(mu, f, x, fam, q)
    if not per_radius:
        raise EmptyFamily(f"no ball of the family contains {x}")
    best = per_radius[0][1]
    for _, rec in per_radius[1:]:
        if rec.average > best.average:
            best = rec
    return NoncenteredResult(best.average, best.ball, len(per_radius))


def brute_force_discrete_max(
    mu: DiscreteWeights,
    f: TestFunction,
    x: Point,
    window: Window,
    max_radius: int,
    metric: MetricKind = MetricKind.SUPREMUM,
) -> LogNumber:
    """Naive exact sup: every center, every canonical radius, every point summed."""
    best = None
    for r in [HALF] + list(range(1, max_radius + 1)):
        for c in window.points():
            b = Ball(Point(c, True), r, metric)
            if not ball_contains(b, x):
                continue
            mass = LogNumber.zero()
            integral = LogNumber.zero()
            for p in lattice_points_in_ball(b):
                w = mu.weight(p)
                mass = mass + w
                integral = integral + w * LogNumber.of(f.lattice_value(p.coords))
            avg = integral / mass
            if best is None or avg > best:
                best = avg
    if best is None:
        raise EmptyFamily(f"no ball of the family contains {x}")
    return best


def oscillation_average(
    mu: Measure, f: TestFunction, b: Ball, x: Point, q: QuadratureSpec = DEFAULT_SPEC
) -> LogNumber:
    """``(1/mu(B)) int_B |f(y) - f(x)| dmu(y)`` with the preset's value at x."""
    level = f.point_value(x)
    osc = Oscillation(f, level)
    return ball_integral(mu, osc, b, q) / ball_mass(mu, b, q)
