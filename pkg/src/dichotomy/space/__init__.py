"""Points, metrics, balls, measures, test functions and integration."""

from .functions import (
    EX1_F,
    EX3_F,
    EX4_G,
    Added,
    AxisPowers,
    BallBumps,
    Constant,
    Oscillation,
    PositivePart,
    Scaled,
    StripSteps,
    Tabulated,
    TestFunction,
    load_function_table,
)
from .geometry import (
    Ball,
    MetricKind,
    Point,
    Window,
    ball_contains,
    bounding_window,
    distance,
    lattice_points_in_ball,
    lattice_rows,
    parse_point,
    point,
)
from .integration import ball_integral, ball_mass
from .lattice import LatticeSums
from .measures import (
    FULL_SPACE,
    DiscreteWeights,
    Measure,
    Mixed,
    Segment,
    WeightedLebesgue,
    axis_heavy_measure,
    ex1_measure,
    ex2_measure,
    ex3_measure,
    ex4_measure,
    ex5_measure,
    load_weight_table,
    measure_log_domain,
    mirrored,
    unit_lattice,
    write_weight_table,
)

__all__ = [
    "Added",
    "AxisPowers",
    "Ball",
    "BallBumps",
    "Constant",
    "DiscreteWeights",
    "EX1_F",
    "EX3_F",
    "EX4_G",
    "FULL_SPACE",
    "LatticeSums",
    "Measure",
    "MetricKind",
    "Mixed",
    "Oscillation",
    "Point",
    "PositivePart",
    "Scaled",
    "Segment",
    "StripSteps",
    "Tabulated",
    "TestFunction",
    "WeightedLebesgue",
    "Window",
    "axis_heavy_measure",
    "ball_contains",
    "ball_integral",
    "ball_mass",
    "bounding_window",
    "distance",
    "ex1_measure",
    "ex2_measure",
    "ex3_measure",
    "ex4_measure",
    "ex5_measure",
    "lattice_points_in_ball",
    "lattice_rows",
    "load_function_table",
    "load_weight_table",
    "measure_log_domain",
    "mirrored",
    "parse_point",
    "point",
    "unit_lattice",
    "write_weight_table",
]
