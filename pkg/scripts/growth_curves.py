"""Plot-ready CSV of truncated centered maxima on the e^{x^2} line.

One row per (point, cutoff): the running maximum of A_r f(x) for r up to
the cutoff, on a geometric schedule.  The origin grows roughly like r/2;
negative points level off below 1.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from dichotomy.analysis import truncated_values, Mode
from dichotomy.quadrature import QuadratureSpec
from dichotomy.space import EX1_F, ex1_measure, point


@dataclass
class Config:
    points: tuple = (-2.0, -1.0, 0.0, 1.0)
    max_exponent: int = 24  # cutoffs 2^(k/2), k = 0..max_exponent


def run(cfg: Config, out=sys.stdout) -> None:
    schedule = [2.0 ** (k / 2) for k in range(cfg.max_exponent + 1)]
    q = QuadratureSpec(log_domain=True)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "cutoff", "value", "log_value"])
    for x in cfg.points:
        values = truncated_values(ex1_measure(), EX1_F, point(x, lattice=False), schedule, Mode.CENTERED, q=q)
        for r, v in zip(schedule, values):
            w.writerow([x, r, repr(float(v)), repr(v.log)])


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--points", type=float, nargs="+", default=list(Config.points))
    p.add_argument("--max-exponent", type=int, default=Config.max_exponent)
    a = p.parse_args()
    run(Config(tuple(a.points), a.max_exponent))
