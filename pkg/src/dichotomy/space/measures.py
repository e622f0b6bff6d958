"""The three measure variants: lattice weights, weighted Lebesgue, mixed."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from numbers import Rational
from pathlib import Path
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from ..errors import DimensionMismatch, NonpositiveMass
from ..lognum import LogNumber, parse_number
from .geometry import Point

DISCRETE_PRESETS = ("UNIT", "EX3", "EX4")
CONTINUOUS_PRESETS = ("UNIT", "GAUSS_PLUS", "GAUSS_MINUS")


def preset_lattice_weight(preset: str, p: tuple) -> int:
    if preset == "UNIT":
        return 1
    if len(p) != 2:
        raise DimensionMismatch(f"preset {preset} lives on Z^2")
    n, m = p
    if n == 0:
        return 4 ** abs(m)
    if preset == "EX4" and n < 0 and m == 0:
        return 2 ** (n * n)
    return 1


@dataclass(frozen=True, eq=False)
class DiscreteWeights:
    """Point masses on Z^d.  ``table`` overrides the preset; the default is 1."""

    dim: int
    preset: str = "UNIT"
    table: Mapping[tuple, LogNumber] = field(default_factory=dict)

    def __post_init__(self):
        if self.preset not in DISCRETE_PRESETS:
            raise ValueError(f"unknown discrete preset {self.preset!r}")
        if self.dim not in (1, 2):
            raise DimensionMismatch(f"unsupported dimension {self.dim}")
        if self.preset != "UNIT" and self.dim != 2:
            raise DimensionMismatch(f"preset {self.preset} requires dimension 2")
        table = {}
        for key, w in self.table.items():
            key = tuple(int(k) for k in key)
            if len(key) != self.dim:
                raise DimensionMismatch(f"table key {key} in dimension {self.dim}")
            w = LogNumber.of(w)
            if w.is_zero:
                raise NonpositiveMass(f"weight at {key} must be strictly positive")
            table[key] = w
        object.__setattr__(self, "table", table)

    @property
    def log_domain(self) -> bool:
        return self.preset == "EX4" or any(not w.is_exact for w in self.table.values())

    @property
    def exact(self) -> bool:
        return all(w.is_exact for w in self.table.values())

    def weight(self, p) -> LogNumber:
        key = tuple(p.coords) if isinstance(p, Point) else tuple(p)
        w = self.table.get(key)
        if w is not None:
            return w
        return LogNumber.of(preset_lattice_weight(self.preset, key))

    def exact_weight(self, key: tuple) -> Rational | None:
        w = self.table.get(key)
        if w is not None:
            return w.exact
        return preset_lattice_weight(self.preset, key)

    def __repr__(self) -> str:
        return f"DiscreteWeights(dim={self.dim}, preset={self.preset}, table={len(self.table)} entries)"


def load_weight_table(path: str | Path) -> DiscreteWeights:
    """Read a ``n,m,weight`` (or ``n,weight``) CSV; ``log:<x>`` entries mean e**x."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        fields = [f.strip() for f in reader.fieldnames or []]
        if fields == ["n", "m", "weight"]:
            dim = 2
        elif fields == ["n", "weight"]:
            dim = 1
        else:
            raise ValueError(f"{path}: expected header n,m,weight or n,weight, got {fields}")
        table = {}
        for row in reader:
            row = {k.strip(): v for k, v in row.items()}
            key = (int(row["n"]),) if dim == 1 else (int(row["n"]), int(row["m"]))
            table[key] = parse_number(row["weight"])
    return DiscreteWeights(dim, "UNIT", table)


def write_weight_table(mu: DiscreteWeights, path: str | Path) -> None:
    header = ["n", "weight"] if mu.dim == 1 else ["n", "m", "weight"]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for key in sorted(mu.table):
            w = mu.table[key]
            text = str(w.exact) if w.is_exact else f"log:{w.log!r}"
            writer.writerow([*key, text])


# -- continuous weights ------------------------------------------------------

LogWeightFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class WeightFn:
    """A strictly positive density given by its log on an ``(k, d)`` array."""

    name: str
    log: LogWeightFn
    linear: Callable[[np.ndarray], np.ndarray]
    hints: tuple = ()

    def __repr__(self) -> str:
        return f"WeightFn({self.name})"


def _sq(x: np.ndarray) -> np.ndarray:
    return np.sum(x * x, axis=1)


_GAUSS_HINTS = (-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0)

WEIGHT_PRESETS = {
    "UNIT": WeightFn("UNIT", lambda x: np.zeros(len(x)), lambda x: np.ones(len(x))),
    "GAUSS_PLUS": WeightFn("GAUSS_PLUS", _sq, lambda x: np.exp(_sq(x)), (0.0,)),
    "GAUSS_MINUS": WeightFn(
        "GAUSS_MINUS", lambda x: -_sq(x), lambda x: np.exp(-_sq(x)), _GAUSS_HINTS
    ),
}


def weight_fn(spec: Union[str, WeightFn, Callable]) -> WeightFn:
    if isinstance(spec, WeightFn):
        return spec
    if isinstance(spec, str):
        try:
            return WEIGHT_PRESETS[spec]
        except KeyError:
            raise ValueError(f"unknown weight preset {spec!r}") from None
    return WeightFn("user", spec, lambda x: np.exp(spec(x)))


@dataclass(frozen=True, eq=False)
class WeightedLebesgue:
    """``w(x) dx`` on R^d; ``weight`` is a preset name or a log-density callable."""

    dim: int
    weight: Union[str, WeightFn, Callable] = "UNIT"
    log_domain: bool = False

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DimensionMismatch(f"unsupported dimension {self.dim}")
        object.__setattr__(self, "weight", weight_fn(self.weight))


FULL_SPACE = "FULL_SPACE"


@dataclass(frozen=True)
class Segment:
    start: Point
    end: Point

    def __post_init__(self):
        if self.start.dim != self.end.dim:
            raise DimensionMismatch("segment endpoints of different dimension")
        if self.start.coords == self.end.coords:
            raise ValueError("degenerate segment")


@dataclass(frozen=True, eq=False)
class Mixed:
    """Sum of weighted Lebesgue measures on the whole space and on segments."""

    dim: int
    components: Sequence[tuple] = ()
    log_domain: bool = False

    def __post_init__(self):
        comps = []
        seen = []
        for support, weight in self.components:
            if support != FULL_SPACE:
                if not isinstance(support, Segment):
                    raise TypeError(f"bad support {support!r}")
                if support.start.dim != self.dim:
                    raise DimensionMismatch("segment dimension mismatch")
            key = support if support == FULL_SPACE else (support.start.coords, support.end.coords)
            if key in seen:
                raise ValueError(f"duplicate support {support!r} in Mixed measure")
            seen.append(key)
            comps.append((support, weight_fn(weight)))
        if not comps:
            raise NonpositiveMass("Mixed measure without components")
        object.__setattr__(self, "components", tuple(comps))


Measure = Union[DiscreteWeights, WeightedLebesgue, Mixed]


def measure_log_domain(mu: Measure) -> bool:
    if isinstance(mu, Mixed):
        return mu.log_domain or any(w.name == "GAUSS_PLUS" for _, w in mu.components)
    return mu.log_domain


# -- named constructors --------------------------------------------------------

def ex1_measure() -> WeightedLebesgue:
    return WeightedLebesgue(1, "GAUSS_PLUS", log_domain=True)


def ex2_measure() -> WeightedLebesgue:
    return WeightedLebesgue(1, "GAUSS_MINUS")


def ex3_measure() -> DiscreteWeights:
    return DiscreteWeights(2, "EX3")


def ex4_measure() -> DiscreteWeights:
    return DiscreteWeights(2, "EX4")


def ex5_measure() -> Mixed:
    seg = Segment(Point((0, 0), True), Point((1, 0), True))
    return Mixed(2, ((seg, "UNIT"), (FULL_SPACE, "UNIT")))


def unit_lattice(dim: int = 2) -> DiscreteWeights:
    return DiscreteWeights(dim, "UNIT")


def axis_heavy_measure(k_max: int = 6, first: int = 8, gap: int = 2) -> DiscreteWeights:
    """Unit weights on Z^2 plus ``2**(4**(k+1))`` at ``(first + gap*(k-1), 0)``.

    Masses jump by far more than ``4**k`` across ``B_{a_k+1}`` versus
    ``B_{a_k}``, so the growth condition fails along the positive x-axis.
    """
    table = {(first + gap * (k - 1), 0): LogNumber.of(2 ** (4 ** (k + 1))) for k in range(1, k_max + 1)}
    return DiscreteWeights(2, "UNIT", table)


def mirrored(mu: DiscreteWeights) -> DiscreteWeights:
    """Reflect the table through the origin (x -> -x)."""
    table = {tuple(-c for c in key): w for key, w in mu.table.items()}
    return DiscreteWeights(mu.dim, mu.preset, table)

