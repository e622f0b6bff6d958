"""Ball masses and ball integrals for every measure variant.

Lattice measures are summed exactly.  Continuous balls are integrated in the
ball's own normalized coordinates (``x = c + r z``), so tolerances do not
depend on how small or large the ball is:

* 1-D: ``r * int_{-1}^{1} g(c + r z) dz``
* 2-D disc: ``r**2 * int cos(t)**2 int_{-1}^{1} g(cx + r cos(t) s, cy + r sin(t)) ds dt``
* 2-D square: ``r**2 * int int g(cx + r s, cy + r t) ds dt``
* segments: clipped against the ball analytically, then a 1-D integral along
  the segment parameter measured from the foot of the center.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from ..errors import DimensionMismatch, EmptyBall, NonpositiveMass
from ..lognum import LogNumber, lsum
from ..quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_many
from .functions import TestFunction, check_dim
from .geometry import Ball, MetricKind, lattice_rows
from .measures import (
    FULL_SPACE,
    DiscreteWeights,
    Measure,
    Mixed,
    Segment,
    WeightedLebesgue,
    WeightFn,
    measure_log_domain,
)


def _check(mu: Measure, b: Ball) -> None:
    if mu.dim != b.dim:
        raise DimensionMismatch(f"measure dimension {mu.dim} vs ball dimension {b.dim}")


def ball_mass(mu: Measure, b: Ball, q: QuadratureSpec = DEFAULT_SPEC) -> LogNumber:
    """``mu(B)``; exact for lattice measures, adaptive quadrature otherwise."""
    _check(mu, b)
    if isinstance(mu, DiscreteWeights):
        total = _lattice_sum(mu, b, None)
    else:
        total = _continuous(mu, None, b, q)
    if total.is_zero:
        if isinstance(mu, DiscreteWeights):
            raise EmptyBall(f"{b} contains no lattice point")
        raise NonpositiveMass(f"{b} has zero mass")
    return total


def ball_integral(
    mu: Measure, f: TestFunction, b: Ball, q: QuadratureSpec = DEFAULT_SPEC
) -> LogNumber:
    """``int_B |f| dmu`` with the same backends as :func:`ball_mass`."""
    _check(mu, b)
    check_dim(f, mu.dim)
    if isinstance(mu, DiscreteWeights):
        return _lattice_sum(mu, b, f)
    return _continuous(mu, f, b, q)


# -- lattice ------------------------------------------------------------------

def _lattice_sum(mu: DiscreteWeights, b: Ball, f: TestFunction | None) -> LogNumber:
    terms = []
    for m, lo, hi in lattice_rows(b):
        for n in range(lo, hi + 1):
            key = (n,) if m is None else (n, m)
            w = mu.weight(key)
            if f is None:
                terms.append(w)
                continue
            v = f.lattice_value(key)
            if not isinstance(v, LogNumber) and v == 0:
                continue
            terms.append(w * LogNumber.of(v))
    return lsum(terms)


# -- continuous -----------------------------------------------------------------

def _components(mu: Measure):
    if isinstance(mu, WeightedLebesgue):
        return [(FULL_SPACE, mu.weight)]
    if isinstance(mu, Mixed):
        return list(mu.components)
    raise TypeError(f"not a continuous measure: {mu!r}")


def _continuous(mu: Measure, f: TestFunction | None, b: Ball, q: QuadratureSpec) -> LogNumber:
    log_domain = q.log_domain or measure_log_domain(mu)
    logs = []
    for support, w in _components(mu):
        if support == FULL_SPACE:
            logs.append(_full_space(w, f, b, q, log_domain))
        else:
            logs.append(_segment(support, w, f, b, q, log_domain))
    finite = [v for v in logs if v != -math.inf]
    if not finite:
        return LogNumber.zero()
    top = max(finite)
    return LogNumber.from_log(top + math.log(sum(math.exp(v - top) for v in finite)))


def _integrand(w: WeightFn, f: TestFunction | None, log_domain: bool) -> Callable:
    """Integrand on an ``(k, d)`` coordinate array."""
    if log_domain:
        if f is None:
            return w.log
        return lambda x: w.log(x) + f.log_values(x)
    if f is None:
        return w.linear
    return lambda x: w.linear(x) * f.values(x)


def _axis_breaks(w: WeightFn, f: TestFunction | None, axis: int) -> list[float]:
    pts = list(w.hints)
    if f is not None:
        pts.extend(f.breaks(axis))
    return pts


def _mapped(breaks, center: float, scale: float, lo=-1.0, hi=1.0) -> list[float]:
    out = [lo, hi]
    for p in breaks:
        z = (p - center) / scale
        if lo < z < hi:
            out.append(z)
    return sorted(set(out))


def _to_log(value: float, log_domain: bool) -> float:
    if log_domain:
        return float(value)
    if value < 0:
        value = 0.0  # roundoff on a nonnegative integrand
    return math.log(value) if value > 0 else -math.inf


def _full_space(w, f, b: Ball, q, log_domain) -> float:
    g = _integrand(w, f, log_domain)
    r = float(b.radius)
    c = [float(v) for v in b.center]
    if b.dim == 1:
        zb = _mapped(_axis_breaks(w, f, 0), c[0], r)
        val = integrate_many(
            lambda _pid, z: g((c[0] + r * z)[:, None]), [zb], q, log_domain
        )[0]
        return _to_log(val, log_domain) + math.log(r)
    if b.metric == MetricKind.SUPREMUM:
        val = _square(g, c, r, _axis_breaks(w, f, 0), _axis_breaks(w, f, 1), q, log_domain)
    else:
        val = _disc(g, c, r, _axis_breaks(w, f, 0), _axis_breaks(w, f, 1), q, log_domain)
    return _to_log(val, log_domain) + 2.0 * math.log(r)


def _inner(g, xs_center, y_vals, half_widths, r_x, x_breaks, q, log_domain):
    """Batch of inner x-integrals over s in (-1, 1), one per outer node."""
    problems = [
        _mapped(x_breaks, xs_center, hw) if hw > 0 else [-1.0, 1.0] for hw in half_widths
    ]
    y_vals = np.asarray(y_vals)
    half_widths = np.asarray(half_widths)

    def func(pid, s):
        x = xs_center + half_widths[pid] * s
        return g(np.column_stack([x, y_vals[pid]]))

    return integrate_many(func, problems, q, log_domain)


def _disc(g, c, r, x_breaks, y_breaks, q, log_domain):
    cx, cy = c
    t_breaks = [-math.pi / 2, math.pi / 2]
    for yb in y_breaks:
        u = (yb - cy) / r
        if -1.0 < u < 1.0:
            t_breaks.append(math.asin(u))
    t_breaks = sorted(set(t_breaks))

    def outer(_pid, t):
        cos_t = np.cos(t)
        inner = _inner(g, cx, cy + r * np.sin(t), r * cos_t, r, x_breaks, q, log_domain)
        if log_domain:
            with np.errstate(divide="ignore"):
                return inner + 2.0 * np.log(cos_t)
        return inner * cos_t * cos_t

    return integrate_many(outer, [t_breaks], q, log_domain)[0]


def _square(g, c, r, x_breaks, y_breaks, q, log_domain):
    cx, cy = c
    t_breaks = _mapped(y_breaks, cy, r)

    def outer(_pid, t):
        widths = np.full(len(t), r)
        return _inner(g, cx, cy + r * t, widths, r, x_breaks, q, log_domain)

    return integrate_many(outer, [t_breaks], q, log_domain)[0]


def _exact_half_chord_sq(seg: Segment, b: Ball) -> float:
    """``r**2 - dist(center, line)**2`` in rational arithmetic.

    Tangent-scale balls (radius exceeding the distance by ~1e-20 relative)
    would otherwise lose the chord to cancellation.
    """
    p = [Fraction(v) for v in seg.start]
    d = [Fraction(e) - a for e, a in zip(seg.end, p)]
    cp = [Fraction(c) - a for c, a in zip(b.center, p)]
    dd = sum(v * v for v in d)
    dot = sum(x * y for x, y in zip(cp, d))
    perp_sq = sum(v * v for v in cp) - dot * dot / dd
    return float(Fraction(b.radius) ** 2 - perp_sq)


def _segment(seg: Segment, w, f, b: Ball, q, log_domain) -> float:
    p = np.asarray([float(v) for v in seg.start])
    e = np.asarray([float(v) for v in seg.end])
    length = float(np.linalg.norm(e - p))
    u = (e - p) / length
    c = np.asarray([float(v) for v in b.center])
    r = float(b.radius)
    t_c = float(np.dot(c - p, u))
    foot = p + t_c * u
    if b.metric == MetricKind.SUPREMUM and b.dim == 2:
        lo, hi = -math.inf, math.inf
        for i in range(2):
            off = foot[i] - c[i]
            if u[i] == 0.0:
                if abs(off) >= r:
                    return -math.inf
                continue
            a1, a2 = (-r - off) / u[i], (r - off) / u[i]
            lo, hi = max(lo, min(a1, a2)), min(hi, max(a1, a2))
    else:
        half_sq = _exact_half_chord_sq(seg, b)
        if half_sq <= 0:
            return -math.inf
        half = math.sqrt(half_sq)
        lo, hi = -half, half
    lo, hi = max(lo, -t_c), min(hi, length - t_c)
    if not lo < hi:
        return -math.inf
    mid, half_len = 0.5 * (lo + hi), 0.5 * (hi - lo)
    g = _integrand(w, f, log_domain)

    def func(_pid, z):
        s = mid + half_len * z
        return g(foot[None, :] + s[:, None] * u[None, :])

    val = integrate_many(func, [[-1.0, 1.0]], q, log_domain)[0]
    return _to_log(val, log_domain) + math.log(half_len)
