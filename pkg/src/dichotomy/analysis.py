"""Growth-ratio analysis, per-point growth classification, and the
constructor for a counterexample function when ball masses grow too fast.

Divergence of a maximal function cannot be observed numerically.  What is
reported is a trend: a point is ``DIVERGENT_TREND`` when the truncated
maximal values exceed a threshold *and* are still rising over the tail of
the radius schedule.  Exact lower bounds are checked elsewhere.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import SelectionFailed, VerificationFailed, WitnessNotFound
from .lognum import LogNumber, lsum
from .maximal import (
    _records,
    centered_max_truncated,
    default_metric,
    noncentered_by_radius,
)
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_many
from .space import (
    Ball,
    BallBumps,
    DiscreteWeights,
    Measure,
    MetricKind,
    Point,
    TestFunction,
    WeightedLebesgue,
    ball_contains,
    ball_mass,
    lattice_points_in_ball,
    point,
)

SLOPE_TOL = 1e-9


class Classification(str, Enum):
    BOUNDED_TREND = "BOUNDED_TREND"
    DIVERGENT_TREND = "DIVERGENT_TREND"


class Mode(str, Enum):
    CENTERED = "CENTERED"
    NONCENTERED = "NONCENTERED"


def _num(value: LogNumber):
    return value.to_json()


# -- growth ratios ---------------------------------------------------------------

@dataclass(frozen=True)
class RatioSeries:
    base_point: Point
    r_values: tuple
    ratios: tuple  # LogNumber, mu(B_{r+1}) / mu(B_r)
    tail_limsup_estimate: LogNumber
    tail_fraction: float = 0.25

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": "ratio_series",
            "base_point": [float(c) for c in self.base_point],
            "r_values": [float(r) for r in self.r_values],
            "ratios": [_num(v) for v in self.ratios],
            "exact_ratios": [
                str(v.exact) if v.is_exact and len(str(v.exact)) < 200 else None for v in self.ratios
            ],
            "tail_fraction": self.tail_fraction,
            "tail_limsup_estimate": _num(self.tail_limsup_estimate),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["r", "ratio", "log_ratio"])
        for r, v in zip(self.r_values, self.ratios):
            writer.writerow([float(r), repr(float(v)), repr(v.log)])
        return buf.getvalue()


def tail_max(values: Sequence[LogNumber], tail_fraction: float) -> LogNumber:
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    count = math.ceil(tail_fraction * len(values))
    tail = list(values)[-count:]
    best = tail[0]
    for v in tail[1:]:
        if v > best:
            best = v
    return best


def condition_c_ratio_series(
    mu: Measure,
    y0: Point,
    r_values: Sequence,
    q: QuadratureSpec = DEFAULT_SPEC,
    tail_fraction: float = 0.25,
    metric: MetricKind | None = None,
) -> RatioSeries:
    """Ratios ``mu(B_{r+1}(y0)) / mu(B_r(y0))`` and a tail-max limsup proxy."""
    r_values = list(r_values)
    if not r_values:
        raise ValueError("empty r_values")
    if any(r <= 0 for r in r_values) or any(b <= a for a, b in zip(r_values, r_values[1:])):
        raise ValueError("r_values must be positive and increasing")
    metric = metric or default_metric(mu)
    masses: dict = {}

    def mass(r):
        if r not in masses:
            masses[r] = ball_mass(mu, Ball(y0, r, metric), q)
        return masses[r]

    ratios = tuple(mass(r + 1) / mass(r) for r in r_values)
    return RatioSeries(y0, tuple(r_values), ratios, tail_max(ratios, tail_fraction), tail_fraction)


# -- growth classification ---------------------------------------------------------

@dataclass(frozen=True)
class GrowthReport:
    point: Point
    schedule: tuple
    values: tuple  # LogNumber, cumulative truncated maximal values
    classification: Classification
    growth_slope: float
    sup_observed: LogNumber
    threshold: float
    mode: Mode = Mode.CENTERED

    def to_json(self) -> dict:
        return {
            "point": [float(c) for c in self.point],
            "mode": self.mode.value,
            "schedule": [float(r) for r in self.schedule],
            "values": [_num(v) for v in self.values],
            "log_values": [v.log for v in self.values],
            "classification": self.classification.value,
            "growth_slope": self.growth_slope,
            "sup_observed": _num(self.sup_observed),
            "threshold": self.threshold,
        }

    def csv_rows(self) -> list[list]:
        x = ";".join(str(float(c)) for c in self.point)
        return [
            [x, self.mode.value, float(r), repr(float(v)), repr(v.log), self.classification.value]
            for r, v in zip(self.schedule, self.values)
        ]


CSV_HEADER = ["point", "mode", "cutoff", "value", "log_value", "classification"]


def growth_slope(schedule: Sequence, values: Sequence[LogNumber], tail_fraction: float = 0.5) -> float:
    """Least-squares slope of log value against log radius over the tail."""
    count = max(2, math.ceil(tail_fraction * len(values)))
    pairs = [
        (math.log(float(r)), v.log)
        for r, v in list(zip(schedule, values))[-count:]
        if math.isfinite(v.log)
    ]
    if len(pairs) < 2:
        return 0.0
    xs = np.array([p[0] for p in pairs])
    ys = np.array([p[1] for p in pairs])
    if np.ptp(xs) == 0:
        return 0.0
    ys = ys - ys[0]
    slope = float(np.polyfit(xs - xs.mean(), ys, 1)[0])
    return 0.0 if abs(slope) < SLOPE_TOL else slope


def _cumulative(values: Sequence[LogNumber]) -> tuple:
    out = []
    best = None
    for v in values:
        if best is None or v > best:
            best = v
        out.append(best)
    return tuple(out)


def truncated_values(
    mu: Measure,
    f: TestFunction,
    x: Point,
    schedule: Sequence,
    mode: Mode,
    fam=None,
    q: QuadratureSpec = DEFAULT_SPEC,
) -> tuple:
    """Truncated maximal values for each cutoff of an increasing schedule."""
    schedule = list(schedule)
    if mode == Mode.CENTERED:
        res = centered_max_truncated(mu, f, x, schedule, q)
        return _cumulative([rec.average for rec in res.records])
    if fam is None:
        raise ValueError("NONCENTERED classification needs a ball family")
    per_radius = noncentered_by_radius(mu, f, x, fam, q)
    out = []
    best = None
    i = 0
    for cutoff in schedule:
        while i < len(per_radius) and per_radius[i][0] <= cutoff:
            avg = per_radius[i][1].average
            if best is None or avg > best:
                best = avg
            i += 1
        out.append(best if best is not None else LogNumber.zero())
    return tuple(out)


def classify_point(
    mu: Measure,
    f: TestFunction,
    x: Point,
    schedule: Sequence,
    mode: Mode = Mode.CENTERED,
    fam=None,
    threshold: float = 1e3,
    q: QuadratureSpec = DEFAULT_SPEC,
    tail_fraction: float = 0.5,
) -> GrowthReport:
    mode = Mode(mode)
    if callable(fam) and not hasattr(fam, "balls"):
        fam = fam(x)
    values = truncated_values(mu, f, x, schedule, mode, fam, q)
    slope = growth_slope(schedule, values, tail_fraction)
    sup = values[-1]
    divergent = sup > LogNumber.of(float(threshold)) and slope > 0
    cls = Classification.DIVERGENT_TREND if divergent else Classification.BOUNDED_TREND
    return GrowthReport(x, tuple(schedule), values, cls, slope, sup, float(threshold), mode)


@dataclass(frozen=True)
class ScanResult:
    reports: tuple
    bounded: int
    divergent: int
    bounded_mass: LogNumber
    violation: bool

    @property
    def verdicts(self) -> list[str]:
        return ["D" if r.classification == Classification.DIVERGENT_TREND else "B" for r in self.reports]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": "dichotomy_scan",
            "reports": [r.to_json() for r in self.reports],
            "summary": {
                "bounded": self.bounded,
                "divergent": self.divergent,
                "bounded_sampled_mass": _num(self.bounded_mass),
                "dichotomy_violating_sample": self.violation,
            },
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.reports:
            writer.writerows(r.csv_rows())
        return buf.getvalue()


def dichotomy_scan(
    mu: Measure,
    f: TestFunction,
    points: Sequence[Point],
    schedule: Sequence,
    mode: Mode = Mode.CENTERED,
    fam=None,
    threshold: float = 1e3,
    q: QuadratureSpec = DEFAULT_SPEC,
    cell_radius=Fraction(1, 2),
) -> ScanResult:
    """Classify every point; flag samples where both classes occur.

    The bounded class is weighted by ``mu(B_cell(x))`` per point, which is
    positive by the standing assumption on ball masses.
    """
    if not points:
        raise ValueError("no points to scan")
    reports = tuple(
        classify_point(mu, f, x, schedule, mode, fam, threshold, q) for x in points
    )
    bounded = [r for r in reports if r.classification == Classification.BOUNDED_TREND]
    divergent = len(reports) - len(bounded)
    metric = default_metric(mu)
    bmass = lsum(ball_mass(mu, Ball(r.point, cell_radius, metric), q) for r in bounded)
    violation = bool(bounded) and divergent > 0 and not bmass.is_zero
    return ScanResult(reports, len(bounded), divergent, bmass, violation)


# -- necessity construction -----------------------------------------------------------

ORIGIN = point(0, 0)


def _mass_cache(mu, q, metric, center=ORIGIN):
    cache: dict = {}

    def mass(r):
        if r not in cache:
            cache[r] = ball_mass(mu, Ball(center, r, metric), q)
        return cache[r]

    return mass


def growth_witness_sequence(
    mu: Measure,
    k_max: int,
    search_horizon: float,
    q: QuadratureSpec = DEFAULT_SPEC,
    step=Fraction(1, 2),
    start=8,
    metric: MetricKind = MetricKind.EUCLIDEAN,
) -> list:
    """Greedy earliest radii ``a_k`` with ``mu(B_{a_k+1}) >= 4**k mu(B_{a_k})``.

    Scans ``a = start, start + step, ...`` up to ``search_horizon`` and keeps
    ``a_{k+1} >= a_k + 2``.  Raises :class:`WitnessNotFound` (with the prefix
    found so far) when fewer than ``k_max`` radii turn up.
    """
    if mu.dim != 2:
        raise ValueError("the witness search works on planar measures")
    mass = _mass_cache(mu, q, metric)
    found = []
    a = start
    k = 1
    while k <= k_max and a <= search_horizon:
        if mass(a + 1) >= mass(a) * (4**k):
            found.append(a)
            k += 1
            a = a + 2
        else:
            a = a + step
    if len(found) < k_max:
        raise WitnessNotFound(
            f"found {len(found)} of {k_max} growth radii within horizon {search_horizon}", found
        )
    return found


@dataclass(frozen=True)
class SectorWitness:
    a: tuple
    j: tuple
    k: tuple  # 1-based indices into ``a``
    phi0: float
    sector_masses: tuple = ()
    ball_masses: tuple = ()
    metric: MetricKind = MetricKind.EUCLIDEAN

    def to_json(self) -> dict:
        return {
            "a": [float(v) for v in self.a],
            "j": list(self.j),
            "k": list(self.k),
            "phi0": self.phi0,
            "sector_masses": [_num(v) for v in self.sector_masses],
            "ball_masses": [_num(v) for v in self.ball_masses],
        }


def angle(x: float, y: float) -> float:
    """Polar angle in [0, 2*pi); the origin gets 0."""
    if x == 0 and y == 0:
        return 0.0
    phi = math.atan2(y, x)
    return phi + 2 * math.pi if phi < 0 else phi


def sector_bounds(n: int, j: int) -> tuple[float, float]:
    return 2 * math.pi * (j - 1) / 2**n, 2 * math.pi * j / 2**n


class _SectorMasses:
    """``mu`` of the dyadic sectors of ``B_R(0, 0)``, cached per radius."""

    def __init__(self, mu, q, metric):
        self.mu, self.q, self.metric = mu, q, metric
        self._points: dict = {}

    def __call__(self, R, n: int, j: int) -> LogNumber:
        lo, hi = sector_bounds(n, j)
        if isinstance(self.mu, DiscreteWeights):
            if R not in self._points:
                pts = lattice_points_in_ball(Ball(ORIGIN, R, self.metric))
                self._points[R] = [(angle(*p.coords), self.mu.weight(p)) for p in pts]
            return lsum(w for phi, w in self._points[R] if lo <= phi < hi)
        if isinstance(self.mu, WeightedLebesgue):
            return _continuous_sector_mass(self.mu, float(R), lo, hi, self.q)
        raise TypeError("sector masses need a lattice or weighted-Lebesgue measure")


def _continuous_sector_mass(mu: WeightedLebesgue, R: float, lo: float, hi: float, q) -> LogNumber:
    """Polar iterated quadrature of the density over a Euclidean sector."""
    w = mu.weight

    def outer(_pid, phi):
        cos, sin = np.cos(phi), np.sin(phi)

        def inner(pid, s):
            rho = R * s
            pts = np.column_stack([rho * cos[pid], rho * sin[pid]])
            with np.errstate(divide="ignore"):
                return w.log(pts) + np.log(rho)

        return integrate_many(inner, [[0.0, 1.0]] * len(phi), q, True)

    val = integrate_many(outer, [[lo, hi]], q, True)[0]
    return LogNumber.from_log(val + 2 * math.log(R))


def select_sectors(
    mu: Measure,
    a_list: Sequence,
    n_max: int,
    q: QuadratureSpec = DEFAULT_SPEC,
    metric: MetricKind = MetricKind.EUCLIDEAN,
) -> SectorWitness:
    """Nested dyadic sectors carrying a ``2**-n`` share of ``mu(B_{a_k})``.

    At level ``n`` the children of the previous sector are tried in order;
    the child whose qualifying set of ``k`` has the most members beyond the
    previous ``k_n`` wins (the smaller ``j`` on ties), and ``k_n`` is the
    first of those members.
    """
    a_list = list(a_list)
    mass = _mass_cache(mu, q, metric)
    sector = _SectorMasses(mu, q, metric)
    pool = list(range(1, len(a_list) + 1))
    js, ks, smasses, bmasses = [], [], [], []
    k_prev = 0
    for n in range(1, n_max + 1):
        children = [1, 2] if n == 1 else [2 * js[-1] - 1, 2 * js[-1]]
        best = None
        for j in children:
            qualifying = [
                k
                for k in pool
                if sector(a_list[k - 1] + 1, n, j) * (2**n) >= mass(a_list[k - 1])
            ]
            later = [k for k in qualifying if k > k_prev]
            if later and (best is None or len(later) > len(best[2])):
                best = (j, qualifying, later)
        if best is None:
            raise SelectionFailed(f"no sector at level {n} meets the 2^-{n} mass bound")
        j, pool, later = best
        k_prev = later[0]
        js.append(j)
        ks.append(k_prev)
        a = a_list[k_prev - 1]
        smasses.append(sector(a + 1, n, j))
        bmasses.append(mass(a))
    lo, hi = sector_bounds(n_max, js[-1]) if js else (0.0, 0.0)
    return SectorWitness(
        tuple(a_list), tuple(js), tuple(ks), 0.5 * (lo + hi), tuple(smasses), tuple(bmasses), metric
    )


@dataclass
class BumpReport:
    depth: int
    lower_checks: list = field(default_factory=list)
    far_checks: list = field(default_factory=list)
    witness_checks: list = field(default_factory=list)
    prefix_constant: LogNumber | None = None
    passed: bool = True

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "kind": "bump_report",
            "depth": self.depth,
            "passed": self.passed,
            "witness_checks": self.witness_checks,
            "lower_checks": self.lower_checks,
            "far_checks": self.far_checks,
            "prefix_constant": None if self.prefix_constant is None else _num(self.prefix_constant),
        }


def _bump_center(mu, a, phi0):
    x = -(a - 2) * math.cos(phi0)
    y = -(a - 2) * math.sin(phi0)
    if isinstance(mu, DiscreteWeights):
        return point(round(x), round(y))
    return point(x, y, lattice=False)


def _critical_radii(mu, center: Point, r_max) -> list:
    """Radii just past every lattice distance from ``center`` up to ``r_max``."""
    if not isinstance(mu, DiscreteWeights):
        steps = int(math.ceil(float(r_max) * 4))
        return [Fraction(i, 4) for i in range(1, steps + 1)]
    cx, cy = center.coords
    limit = int(math.ceil(float(r_max))) + 1
    sq = set()
    for n in range(-limit, limit + 1):
        for m in range(-limit, limit + 1):
            d = (n - cx) ** 2 + (m - cy) ** 2
            if d < float(r_max) ** 2:
                sq.add(d)
    return [math.sqrt(d + 0.5) for d in sorted(sq)]


def bump_test_function(
    mu: Measure,
    w: SectorWitness,
    N: int,
    q: QuadratureSpec = DEFAULT_SPEC,
    near_point: Point = ORIGIN,
    far_point: Point | None = None,
    prefix_levels: int = 2,
) -> tuple[BallBumps, BumpReport]:
    """Truncated counterexample ``sum 2**n mu(B_n)/mu(B_n-) chi_{B_n-}``.

    ``B_n = B_{a_{k_n}}(0)`` and ``B_n-`` is the half-radius ball at distance
    ``a_{k_n} - 2`` from the origin, opposite the concentration angle.  The
    report re-verifies the witness, the growth of centered averages at
    ``near_point`` and the ``<= 2`` bound at ``far_point`` (default: distance
    3 along the concentration angle, on the lattice if ``mu`` is one) once balls reach
    bump ``prefix_levels`` or later.  Raises :class:`VerificationFailed`
    carrying the first failing level.
    """
    if N > len(w.k):
        raise ValueError(f"witness has depth {len(w.k)}, asked for {N}")
    metric = w.metric
    mass = _mass_cache(mu, q, metric)
    sector = _SectorMasses(mu, q, metric)
    report = BumpReport(N)
    if far_point is None:
        far_point = _bump_center(mu, -1, w.phi0)
    failed_level = None

    for n in range(1, N + 1):
        k = w.k[n - 1]
        a = w.a[k - 1]
        growth_ok = mass(a + 1) >= mass(a) * (4**k)
        smass = sector(a + 1, n, w.j[n - 1])
        sector_ok = smass * (2**n) >= mass(a)
        report.witness_checks.append(
            {"n": n, "k": k, "a": float(a), "growth_ok": growth_ok, "sector_ok": sector_ok}
        )
        if not (growth_ok and sector_ok) and failed_level is None:
            failed_level = n

    bumps = []
    for n in range(1, N + 1):
        a = w.a[w.k[n - 1] - 1]
        small = Ball(_bump_center(mu, a, w.phi0), Fraction(1, 2), metric)
        coef = LogNumber.of(2**n) * mass(a) / ball_mass(mu, small, q)
        bumps.append((small, coef.exact if coef.is_exact else coef))
    f = BallBumps(tuple(bumps))

    for n in range(1, N + 1):
        a = w.a[w.k[n - 1] - 1]
        rec = _records(mu, f, [Ball(near_point, a - 1, metric)], q)[0]
        ok = rec.average >= 2**n
        report.lower_checks.append(
            {"n": n, "radius": float(a - 1), "average": _num(rec.average), "bound": 2**n, "pass": ok}
        )
        if not ok and failed_level is None:
            failed_level = n

    if N > 0:
        a_top = w.a[w.k[N - 1] - 1]
        radii = _critical_radii(mu, far_point, a_top + 6)
        records = _records(mu, f, [Ball(far_point, r, metric) for r in radii], q)
        prefix_max = LogNumber.zero()
        for r, rec in zip(radii, records):
            hit = [n for n, (b, _) in enumerate(bumps, 1) if _balls_meet(Ball(far_point, r, metric), b)]
            level = max(hit) if hit else 0
            if level < prefix_levels:
                if rec.average > prefix_max:
                    prefix_max = rec.average
                continue
            ok = rec.average <= 2
            report.far_checks.append(
                {"radius": float(r), "level": level, "average": _num(rec.average), "bound": 2, "pass": ok}
            )
            if not ok and failed_level is None:
                failed_level = level
        report.prefix_constant = prefix_max

    if failed_level is not None:
        report.passed = False
        err = VerificationFailed(f"verification failed at level {failed_level}", failed_level)
        err.report = report
        raise err
    return f, report


def _balls_meet(big: Ball, small: Ball) -> bool:
    if small.center.lattice and small.radius <= Fraction(1, 2):
        return ball_contains(big, small.center)
    gap = math.dist([float(c) for c in big.center], [float(c) for c in small.center])
    return gap < float(big.radius) + float(small.radius)
