"""Nonnegative quantities that are either exact rationals or natural logs.

Masses and integrals on lattice spaces are exact (``int``/``Fraction``) and
may be astronomically large (``2**(n*n)`` weights).  Continuous quadrature
results only exist as logarithms.  ``LogNumber`` carries both kinds behind
one arithmetic so averages and ratios never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable

import numpy as np

LN2 = math.log(2.0)


def exact_log(value: Rational) -> float:
    """Natural log of a nonnegative rational, safe for huge integers."""
    if value < 0:
        raise ValueError(f"log of negative value {value}")
    if value == 0:
        return -math.inf
    if isinstance(value, int):
        return math.log(value)
    return math.log(value.numerator) - math.log(value.denominator)


def logsumexp(values) -> float:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return -math.inf
    top = float(np.max(arr))
    if top == -math.inf:
        return -math.inf
    if top == math.inf:
        return math.inf
    return top + math.log(float(np.sum(np.exp(arr - top))))


def logdiffexp(a: float, b: float) -> float:
    """log|e^a - e^b|."""
    hi, lo = (a, b) if a >= b else (b, a)
    if hi == -math.inf:
        return -math.inf
    if lo == -math.inf:
        return hi
    gap = hi - lo
    if gap == 0.0:
        return -math.inf
    return hi + math.log(-math.expm1(-gap))


@dataclass(frozen=True)
class LogNumber:
    """A nonnegative real held exactly when possible, always with its log.

    ``exact`` is ``None`` for values that came out of floating point work
    (quadrature, ``log:`` table entries); ``log`` is always populated.
    """

    exact: Rational | None
    log: float

    @classmethod
    def of(cls, value) -> "LogNumber":
        if isinstance(value, LogNumber):
            return value
        if isinstance(value, (int, Fraction)):
            if value < 0:
                raise ValueError(f"negative value {value}")
            return cls(value, exact_log(value))
        value = float(value)
        if value < 0:
            raise ValueError(f"negative value {value}")
        return cls(None, math.log(value) if value > 0 else -math.inf)

    @classmethod
    def from_log(cls, log_value: float) -> "LogNumber":
        return cls(None, float(log_value))

    @classmethod
    def zero(cls) -> "LogNumber":
        return cls(0, -math.inf)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def is_zero(self) -> bool:
        return self.log == -math.inf

    @property
    def log2(self) -> float:
        if self.exact is not None and self.exact > 0:
            v = Fraction(self.exact)
            return math.log2(v.numerator) - math.log2(v.denominator)
        return self.log / LN2

    def __float__(self) -> float:
        if self.exact is not None:
            try:
                return float(self.exact)
            except OverflowError:
                return math.inf
        if self.log > 709.78:
            return math.inf
        return math.exp(self.log)

    def __add__(self, other) -> "LogNumber":
        other = LogNumber.of(other)
        if self.exact is not None and other.exact is not None:
            return LogNumber.of(self.exact + other.exact)
        return LogNumber.from_log(np.logaddexp(self.log, other.log))

    __radd__ = __add__

    def __mul__(self, other) -> "LogNumber":
        other = LogNumber.of(other)
        if self.exact is not None and other.exact is not None:
            return LogNumber.of(self.exact * other.exact)
        if self.is_zero or other.is_zero:
            return LogNumber.zero()
        return LogNumber.from_log(self.log + other.log)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogNumber":
        other = LogNumber.of(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogNumber")
        if self.exact is not None and other.exact is not None:
            return LogNumber.of(Fraction(self.exact) / other.exact)
        if self.is_zero:
            return LogNumber.zero()
        return LogNumber.from_log(self.log - other.log)

    def absdiff(self, other) -> "LogNumber":
        other = LogNumber.of(other)
        if self.exact is not None and other.exact is not None:
            return LogNumber.of(abs(self.exact - other.exact))
        return LogNumber.from_log(logdiffexp(self.log, other.log))

    def _cmp(self, other) -> int:
        other = LogNumber.of(other)
        if self.exact is not None and other.exact is not None:
            return (self.exact > other.exact) - (self.exact < other.exact)
        return (self.log > other.log) - (self.log < other.log)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (LogNumber, int, float, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self) -> int:
        return hash(self.exact) if self.exact is not None else hash(self.log)

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __repr__(self) -> str:
        if self.exact is not None:
            text = str(self.exact)
            if len(text) > 40:
                text = f"~2^{self.log2:.6g}"
            return f"LogNumber({text})"
        return f"LogNumber(log={self.log!r})"

    def to_json(self):
        """Float when representable, else the natural log (flagged)."""
        value = float(self)
        if math.isfinite(value):
            return value
        return {"log": self.log}


def lsum(items: Iterable[LogNumber]) -> LogNumber:
    """Sum LogNumbers, exactly when every term is exact."""
    exact_total: Rational = 0
    logs: list[float] = []
    for item in items:
        item = LogNumber.of(item)
        if item.exact is not None:
            exact_total += item.exact
        else:
            logs.append(item.log)
    if not logs:
        return LogNumber.of(exact_total)
    if exact_total:
        logs.append(exact_log(exact_total))
    return LogNumber.from_log(logsumexp(logs))


def parse_number(text: str) -> LogNumber:
    """Parse ``3``, ``0.25``, ``1/3`` exactly, or ``log:<x>`` as e**x."""
    text = text.strip()
    if text.startswith("log:"):
        return LogNumber.from_log(float(text[4:]))
    return LogNumber.of(Fraction(text))
