"""Test integrands.

Each function answers three questions: its exact value at a lattice point,
its (log-)values on an array of coordinates for quadrature, and where it
jumps along each axis so quadrature cells can be split there.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..errors import DimensionMismatch
from ..lognum import LogNumber, parse_number
from .geometry import MetricKind, Point


def _log(values: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values))


class TestFunction:
    """Base class; subclasses override what they support."""

    __test__ = False  # keep pytest from collecting the class
    name = "function"
    dim: int | None = None

    def lattice_value(self, p: tuple):
        """Exact value (Rational) or LogNumber at a lattice point."""
        raise NotImplementedError(f"{self.name} has no lattice values")

    def values(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError(f"{self.name} has no continuous values")

    def log_values(self, x: np.ndarray) -> np.ndarray:
        return _log(self.values(x))

    def breaks(self, axis: int) -> Sequence[float]:
        return ()

    def point_value(self, p: Point) -> LogNumber:
        """Value of the canonical representative at ``p``."""
        if p.lattice:
            return LogNumber.of(self.lattice_value(p.coords))
        arr = np.asarray([[float(c) for c in p.coords]])
        return LogNumber.of(float(self.values(arr)[0]))

    def to_json(self) -> dict:
        return {"preset": self.name}


@dataclass(frozen=True)
class Constant(TestFunction):
    c: Rational | float = 1
    name = "CONSTANT"

    def lattice_value(self, p):
        return abs(self.c) if isinstance(self.c, (int, Fraction)) else LogNumber.of(abs(self.c))

    def values(self, x):
        return np.full(len(x), abs(float(self.c)))

    def to_json(self):
        return {"preset": self.name, "c": float(self.c)}


class PositivePart(TestFunction):
    """``x * chi_(0, inf)(x)`` on the line."""

    name = "EX1_F"
    dim = 1

    def lattice_value(self, p):
        return max(p[0], 0)

    def values(self, x):
        return np.maximum(x[:, 0], 0.0)

    def log_values(self, x):
        with np.errstate(divide="ignore"):
            return np.where(x[:, 0] > 0, np.log(np.where(x[:, 0] > 0, x[:, 0], 1.0)), -np.inf)

    def breaks(self, axis):
        return (0.0,)


class AxisPowers(TestFunction):
    """``2**n`` (or ``2**(n*n)``) on the positive x-axis of Z^2, zero elsewhere."""

    dim = 2

    def __init__(self, squared: bool):
        self.squared = squared
        self.name = "EX4_G" if squared else "EX3_F"

    def lattice_value(self, p):
        n, m = p
        if n > 0 and m == 0:
            return 2 ** (n * n) if self.squared else 2 ** n
        return 0

    def __eq__(self, other):
        return isinstance(other, AxisPowers) and other.squared == self.squared

    def __hash__(self):
        return hash(("AxisPowers", self.squared))


EX3_F = AxisPowers(squared=False)
EX4_G = AxisPowers(squared=True)
EX1_F = PositivePart()


@dataclass(frozen=True)
class StripSteps(TestFunction):
    """``sum_{n<=depth} 2**n`` on the strips ``[0,1] x (2**-n**2, 2**(1-n**2))``."""

    depth: int = 8
    name = "EX5_F"
    dim = 2

    def strip(self, n: int) -> tuple[float, float]:
        return 2.0 ** (-n * n), 2.0 ** (1 - n * n)

    def values(self, x):
        out = np.zeros(len(x))
        inside = (x[:, 0] >= 0.0) & (x[:, 0] <= 1.0)
        y = x[:, 1]
        for n in range(1, self.depth + 1):
            lo, hi = self.strip(n)
            out = np.where(inside & (y > lo) & (y < hi), 2.0 ** n, out)
        return out

    def breaks(self, axis):
        if axis == 0:
            return (0.0, 1.0)
        pts = []
        for n in range(1, self.depth + 1):
            pts.extend(self.strip(n))
        return tuple(sorted(set(pts)))

    def sup_near(self, p: Point, eps: float) -> float:
        """Supremum of the function on the open ``eps``-disc around ``p``."""
        x0, y0 = (float(c) for c in p)
        dx = max(0.0, -x0, x0 - 1.0)
        best = 0.0
        for n in range(1, self.depth + 1):
            lo, hi = self.strip(n)
            dy = max(0.0, lo - y0, y0 - hi)
            if math.hypot(dx, dy) < eps:
                best = max(best, 2.0 ** n)
        return best

    def l1_norm(self) -> float:
        return sum(2.0 ** n * 2.0 ** (-n * n) for n in range(1, self.depth + 1))

    def to_json(self):
        return {"preset": self.name, "depth": self.depth}


@dataclass(frozen=True)
class BallBumps(TestFunction):
    """``sum c_i chi_{B_i}``; the test-function shape of the necessity argument."""

    bumps: tuple = ()  # ((Ball, coefficient), ...)
    name = "THM2_F"

    def lattice_value(self, p):
        from .geometry import ball_contains

        q = Point(tuple(p), True)
        total = LogNumber.zero()
        for ball, coef in self.bumps:
            if ball_contains(ball, q):
                total = total + coef
        return total.exact if total.is_exact else total

    def values(self, x):
        out = np.zeros(len(x))
        for ball, coef in self.bumps:
            c = np.asarray([float(v) for v in ball.center])
            d = x - c[None, :]
            if ball.metric == MetricKind.SUPREMUM:
                inside = np.max(np.abs(d), axis=1) < float(ball.radius)
            else:
                inside = np.sum(d * d, axis=1) < float(ball.radius) ** 2
            out = out + np.where(inside, float(coef), 0.0)
        return out

    def to_json(self):
        return {
            "preset": self.name,
            "bumps": [
                {"ball": b.to_json(), "coefficient": LogNumber.of(c).to_json()} for b, c in self.bumps
            ],
        }


@dataclass(frozen=True)
class Tabulated(TestFunction):
    table: Mapping[tuple, object] = field(default_factory=dict)
    default: Rational = 0
    name = "TABULATED"

    def lattice_value(self, p):
        v = self.table.get(tuple(p), self.default)
        if isinstance(v, LogNumber):
            return v.exact if v.is_exact else v
        return abs(v)

    def __hash__(self):
        return id(self)


@dataclass(frozen=True)
class Scaled(TestFunction):
    base: TestFunction
    factor: Rational | float = 1
    name = "SCALED"

    def lattice_value(self, p):
        v = self.base.lattice_value(p)
        if isinstance(v, LogNumber) or not isinstance(self.factor, (int, Fraction)):
            return LogNumber.of(v) * LogNumber.of(abs(self.factor))
        return v * abs(self.factor)

    def values(self, x):
        return self.base.values(x) * abs(float(self.factor))

    def breaks(self, axis):
        return self.base.breaks(axis)


@dataclass(frozen=True)
class Added(TestFunction):
    first: TestFunction
    second: TestFunction
    name = "SUM"

    def lattice_value(self, p):
        a, b = self.first.lattice_value(p), self.second.lattice_value(p)
        if isinstance(a, LogNumber) or isinstance(b, LogNumber):
            return LogNumber.of(a) + LogNumber.of(b)
        return a + b

    def values(self, x):
        return self.first.values(x) + self.second.values(x)

    def breaks(self, axis):
        return tuple(sorted(set(self.first.breaks(axis)) | set(self.second.breaks(axis))))


@dataclass(frozen=True)
class Oscillation(TestFunction):
    """``|f(y) - level|`` for the averaged oscillation around a pointwise value."""

    base: TestFunction
    level: LogNumber = LogNumber.zero()
    name = "OSCILLATION"

    def lattice_value(self, p):
        v = self.base.lattice_value(p)
        if isinstance(v, LogNumber) or not self.level.is_exact:
            return LogNumber.of(v).absdiff(self.level)
        return abs(v - self.level.exact)

    def values(self, x):
        return np.abs(self.base.values(x) - float(self.level))

    def breaks(self, axis):
        return self.base.breaks(axis)


def load_function_table(path: str | Path) -> Tabulated:
    """Read a ``n,m,value`` (or ``n,value``) CSV into a tabulated function."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        fields = [f.strip() for f in reader.fieldnames or []]
        if fields not in (["n", "m", "value"], ["n", "value"]):
            raise ValueError(f"{path}: expected header n,m,value or n,value, got {fields}")
        table = {}
        for row in reader:
            row = {k.strip(): v for k, v in row.items()}
            key = tuple(int(row[k]) for k in fields[:-1])
            v = parse_number(row["value"])
            table[key] = v.exact if v.is_exact else v
    return Tabulated(table)


def check_dim(f: TestFunction, dim: int) -> None:
    if f.dim is not None and f.dim != dim:
        raise DimensionMismatch(f"{f.name} is defined in dimension {f.dim}, space has {dim}")
