"""Points, the two metrics, open balls and exact lattice enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Sequence

from ..errors import DimensionMismatch


class MetricKind(str, Enum):
    EUCLIDEAN = "EUCLIDEAN"
    SUPREMUM = "SUPREMUM"


def _coerce(value):
    if isinstance(value, bool):
        raise TypeError("boolean coordinate")
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


@dataclass(frozen=True)
class Point:
    coords: tuple
    lattice: bool = False

    def __post_init__(self):
        coords = tuple(_coerce(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) not in (1, 2):
            raise DimensionMismatch(f"only dimensions 1 and 2 are supported, got {len(coords)}")
        if self.lattice and not all(isinstance(c, int) for c in coords):
            raise ValueError(f"lattice point with non-integer coordinates {coords}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coords)


def point(*coords, lattice: bool | None = None) -> Point:
    """Build a Point; integer coordinates make a lattice point by default."""
    coords = tuple(_coerce(c) for c in coords)
    if lattice is None:
        lattice = all(isinstance(c, int) for c in coords)
    return Point(coords, lattice)


def parse_point(text: str) -> Point:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    values = []
    for p in parts:
        value = Fraction(p)
        values.append(int(value) if value.denominator == 1 else value)
    return point(*values)


def _check_dims(p: Point, q: Point) -> None:
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimension mismatch: {p.dim} vs {q.dim}")


def distance(metric: MetricKind, p: Point, q: Point) -> float:
    _check_dims(p, q)
    diffs = [abs(a - b) for a, b in zip(p, q)]
    if metric == MetricKind.SUPREMUM:
        top = max(diffs)
        return top if isinstance(top, int) else float(top)
    return math.sqrt(sum(float(d) ** 2 for d in diffs))


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: Rational | float
    metric: MetricKind = MetricKind.EUCLIDEAN

    def __post_init__(self):
        object.__setattr__(self, "radius", _coerce(self.radius))
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.dim

    def __str__(self) -> str:
        return f"B_{self.radius}({self.center})"

    def to_json(self) -> dict:
        return {
            "center": [_json_number(c) for c in self.center],
            "radius": _json_number(self.radius),
            "metric": self.metric.value,
        }


def _json_number(value):
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return float(value)
    return float(value)


def ball_contains(b: Ball, p: Point) -> bool:
    """Strict (open ball) membership, exact for rational inputs."""
    _check_dims(b.center, p)
    diffs = [a - c for a, c in zip(p, b.center)]
    if b.metric == MetricKind.SUPREMUM:
        return all(abs(d) < b.radius for d in diffs)
    return sum(d * d for d in diffs) < b.radius * b.radius


@dataclass(frozen=True)
class Window:
    """Inclusive integer box ``lo[i] <= x[i] <= hi[i]``."""

    lo: tuple
    hi: tuple

    @classmethod
    def square(cls, half_width: int, dim: int = 2, center: Sequence[int] | None = None) -> "Window":
        center = tuple(center) if center is not None else (0,) * dim
        return cls(tuple(c - half_width for c in center), tuple(c + half_width for c in center))

    @property
    def dim(self) -> int:
        return len(self.lo)

    def points(self) -> Iterator[tuple]:
        if self.dim == 1:
            for n in range(self.lo[0], self.hi[0] + 1):
                yield (n,)
        else:
            for n in range(self.lo[0], self.hi[0] + 1):
                for m in range(self.lo[1], self.hi[1] + 1):
                    yield (n, m)

    def __contains__(self, p) -> bool:
        return all(lo <= c <= hi for c, lo, hi in zip(p, self.lo, self.hi))


def _open_interval_ints(center, half) -> tuple[int, int]:
    """Integers k with |k - center| < half (half > 0)."""
    lo = math.floor(center - half) + 1
    hi = math.ceil(center + half) - 1
    return lo, hi


def _open_interval_ints_sq(center, half_sq) -> tuple[int, int]:
    """Integers k with (k - center)**2 < half_sq, exact for rationals."""
    if half_sq <= 0:
        return 1, 0
    s = math.sqrt(float(half_sq))
    lo = math.floor(center - s)
    hi = math.ceil(center + s)
    while (lo - center) ** 2 >= half_sq and lo <= hi:
        lo += 1
    while (lo - 1 - center) ** 2 < half_sq:
        lo -= 1
    while (hi - center) ** 2 >= half_sq and hi >= lo:
        hi -= 1
    while (hi + 1 - center) ** 2 < half_sq:
        hi += 1
    return lo, hi


def lattice_rows(b: Ball) -> Iterator[tuple]:
    """Yield ``(m, n_lo, n_hi)`` row runs (2-D) or ``(None, lo, hi)`` (1-D)."""
    c = b.center.coords
    r = b.radius
    if b.dim == 1:
        lo, hi = _open_interval_ints(c[0], r)
        if lo <= hi:
            yield None, lo, hi
        return
    cx, cy = c
    m_lo, m_hi = _open_interval_ints(cy, r)
    for m in range(m_lo, m_hi + 1):
        if b.metric == MetricKind.SUPREMUM:
            lo, hi = _open_interval_ints(cx, r)
        else:
            lo, hi = _open_interval_ints_sq(cx, r * r - (m - cy) ** 2)
        if lo <= hi:
            yield m, lo, hi


def bounding_window(b: Ball) -> Window:
    lo, hi = [], []
    for c in b.center:
        a, z = _open_interval_ints(c, b.radius)
        lo.append(a)
        hi.append(z)
    return Window(tuple(lo), tuple(hi))


def lattice_points_in_ball(b: Ball, window: Window | None = None) -> list[Point]:
    """Lattice points of ``window`` inside the open ball, lexicographic order."""
    if window is None:
        window = bounding_window(b)
    if window.dim != b.dim:
        raise DimensionMismatch(f"window dimension {window.dim} vs ball {b.dim}")
    out = []
    rows = list(lattice_rows(b))
    if b.dim == 1:
        for _, lo, hi in rows:
            for n in range(max(lo, window.lo[0]), min(hi, window.hi[0]) + 1):
                out.append(Point((n,), True))
        return out
    by_row = {m: (lo, hi) for m, lo, hi in rows}
    for n in range(window.lo[0], window.hi[0] + 1):
        for m in range(window.lo[1], window.hi[1] + 1):
            run = by_row.get(m)
            if run and run[0] <= n <= run[1]:
                out.append(Point((n, m), True))
    return out
