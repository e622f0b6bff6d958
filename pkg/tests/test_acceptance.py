"""Acceptance criteria, one test each, printing a PASS/FAIL line per criterion.

Every criterion is checked at its stated tolerance and runtime budget.  A
criterion that does not hold fails here; nothing is relaxed to make it pass.
"""

import json
import time
from fractions import Fraction

import numpy as np

import test_properties as props
from dichotomy.analysis import (
    select_sectors,
    bump_test_function,
    growth_witness_sequence,
)
from dichotomy.cli import main, random_instance
from dichotomy.gallery import EXPECTED_VERDICTS, load_preset, run_claims
from dichotomy.maximal import (
    NoncenteredDiscrete,
    ball_average,
    brute_force_discrete_max,
    centered_max_truncated,
    noncentered_max_truncated,
)
from dichotomy.quadrature import QuadratureSpec
from dichotomy.space import (
    EX1_F,
    EX3_F,
    EX4_G,
    Ball,
    DiscreteWeights,
    MetricKind,
    Window,
    axis_heavy_measure,
    ball_mass,
    ex1_measure,
    ex2_measure,
    ex3_measure,
    ex4_measure,
    point,
)

SUP = MetricKind.SUPREMUM

# cap for the centered series at x = -1: max(f(-1 + r0), 1) with r0 = 9/8
EX1_LEFT_CAP = 1.0


class Criterion:
    def __init__(self, name, budget):
        self.name, self.budget = name, budget
        self.checks = []
        self.start = time.perf_counter()

    def check(self, label, ok, detail=""):
        self.checks.append((label, bool(ok), detail))

    def finish(self, capsys):
        elapsed = time.perf_counter() - self.start
        if self.budget is not None:
            self.check(f"runtime < {self.budget:g} s", elapsed < self.budget, f"{elapsed:.2f} s")
        ok = all(c[1] for c in self.checks)
        failed = [f"{label} ({detail})" for label, passed, detail in self.checks if not passed]
        summary = "; ".join(failed) if failed else f"{len(self.checks)} checks, {elapsed:.2f} s"
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {self.name}: {summary}")
        assert ok, summary


def test_ex3_bounds(capsys):
    c = Criterion("ex3 bounds", 10)
    mu = ex3_measure()
    for N in range(2, 13):
        avg = ball_average(mu, EX3_F, Ball(point(N, 0), N, SUP)).average
        bound = Fraction(2**N, (2 * N - 1) ** 2)
        c.check(f"N={N} lower bound", avg.is_exact and avg.exact >= bound, f"{avg.exact} vs {bound}")
    fam = NoncenteredDiscrete(Window.square(40), 40, SUP)
    res = noncentered_max_truncated(mu, EX3_F, point(-1, 0), fam)
    c.check("sup at (-1,0) <= 4", res.sup.is_exact and res.sup.exact <= 4, str(res.sup.exact))
    c.finish(capsys)


def test_ex4_bounds(capsys):
    c = Criterion("ex4 bounds", 5)
    mu = ex4_measure()
    for N in range(5, 13):
        e = N * N - (N - 2) ** 2 - 1
        hi = ball_average(mu, EX4_G, Ball(point(1, 0), N, SUP)).average
        lo = ball_average(mu, EX4_G, Ball(point(-1, 0), N, SUP)).average
        c.check(f"N={N} B_N(1,0) >= 2^{e}", hi.log2 - e > 0 or hi.exact >= 2**e,
                f"log2 average {hi.log2:.6f}, margin {hi.log2 - e:.6f}")
        c.check(f"N={N} B_N(-1,0) <= 2^-{e}", -e - lo.log2 > 0 or lo.exact <= Fraction(1, 2**e),
                f"log2 average {lo.log2:.6f}, margin {-e - lo.log2:.6f}")
    c.finish(capsys)


def test_growth_ratios(capsys):
    c = Criterion("growth ratios", 5)
    m3 = ex3_measure()
    r3 = ball_mass(m3, Ball(point(0, 0), 15, SUP)) / ball_mass(m3, Ball(point(0, 0), 14, SUP))
    c.check("ex3 r=14 within 1% of 4", abs(float(r3) - 4) <= 0.04, f"{float(r3):.6f}")
    q = QuadratureSpec(rel_tol=1e-9)
    m2 = ex2_measure()
    r2 = ball_mass(m2, Ball(point(0), 11), q) / ball_mass(m2, Ball(point(0), 10), q)
    c.check("ex2 r=10 within 1e-4 of 1", abs(float(r2) - 1) <= 1e-4, f"{float(r2)!r}")
    unit = DiscreteWeights(2, "UNIT")
    for r in range(1, 15):
        ratio = ball_mass(unit, Ball(point(0, 0), r + 1, SUP)) / ball_mass(unit, Ball(point(0, 0), r, SUP))
        c.check(f"unit r={r} exact", ratio.exact == Fraction((2 * r + 1) ** 2, (2 * r - 1) ** 2), str(ratio.exact))
    c.finish(capsys)


def test_ex1_series(capsys):
    c = Criterion("ex1 centered series", 10)
    mu = ex1_measure()
    log_q = QuadratureSpec(log_domain=True)
    grow = centered_max_truncated(mu, EX1_F, point(0), list(range(1, 9)), log_q)
    c.check("x=0 exceeds 10 within r <= 8", grow.sup > 10, f"sup {float(grow.sup):.6f} at r={grow.argmax_radius}")
    left = point(-1)
    fine = QuadratureSpec(rel_tol=1e-10, log_domain=True)
    finer = QuadratureSpec(rel_tol=5e-11, log_domain=True)
    a = centered_max_truncated(mu, EX1_F, left, list(range(1, 9)), fine).sup
    b = centered_max_truncated(mu, EX1_F, left, list(range(1, 9)), finer).sup
    c.check("x=-1 below cap", float(a) <= EX1_LEFT_CAP, f"{float(a):.9f} <= {EX1_LEFT_CAP}")
    drift = abs(float(a) - float(b)) / float(a)
    c.check("x=-1 stable under rel_tol halving", drift <= 1e-6, f"relative drift {drift:.2e}")
    c.finish(capsys)


def test_ex5_segment(capsys):
    c = Criterion("ex5 segment", 30)
    preset = load_preset("EX5")
    wanted = ["ex5.epsilon_constraint", "ex5.segment_average", "ex5.off_segment_bound"]
    for rep in run_claims(preset, only=wanted):
        c.check(f"{rep.claim} {rep.params}", rep.passed, f"{rep.computed} {rep.relation} {rep.bound}")
    c.finish(capsys)


def test_oracle_equivalence(capsys):
    c = Criterion("oracle equivalence", 60)
    rng = np.random.default_rng(2024)
    win = Window.square(4)
    fam = NoncenteredDiscrete(win, 4, SUP)
    agree = total = 0
    for _ in range(100):
        mu, f = random_instance(rng, 4)
        for _ in range(5):
            x = point(*(int(v) for v in rng.integers(-4, 5, size=2)))
            fast = noncentered_max_truncated(mu, f, x, fam).sup
            slow = brute_force_discrete_max(mu, f, x, win, 4, SUP)
            total += 1
            agree += fast.exact == slow.exact
    c.check("fast equals brute force", agree == total == 500, f"{agree}/{total}")
    c.finish(capsys)


PROPERTIES = [
    props.test_truncation_monotone,
    props.test_centered_dominated_by_noncentered,
    props.test_positive_homogeneity,
    props.test_measure_rescaling_in_log_domain,
    props.test_subadditive_per_ball,
    props.test_constant_fixed_point,
    props.test_singleton_lower_bound,
]


def test_property_suite(capsys):
    c = Criterion("property suite", None)
    for prop in PROPERTIES:
        count = prop._hypothesis_internal_use_settings.max_examples
        try:
            prop()
            ok, detail = count >= 200, f"max_examples={count}"
        except Exception as exc:  # hypothesis re-raises the falsifying example
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        c.check(prop.__name__, ok, detail)
    c.finish(capsys)


def test_sector_construction(capsys):
    c = Criterion("sector construction", 30)
    mu = axis_heavy_measure()
    a = growth_witness_sequence(mu, 6, 40)
    w = select_sectors(mu, a, 4)
    c.check("witness depth 4", len(w.k) == 4, f"a={a}, k={w.k}, j={w.j}")
    for n, (s, b) in enumerate(zip(w.sector_masses, w.ball_masses), 1):
        c.check(f"sector n={n}", s.is_exact and b.is_exact and s.exact * 2**n >= b.exact,
                f"log2 {s.log2:.3f} vs {b.log2 - n:.3f}")
    _, report = bump_test_function(mu, w, 4)
    for row in report.lower_checks:
        c.check(f"near n={row['n']} >= 2^n", row["pass"], f"{row['average']} vs {row['bound']}")
    far = report.far_checks
    c.check("far averages <= 2 beyond prefix", far and all(r["pass"] for r in far),
            f"{len(far)} radii, max {max(r['average'] for r in far):.4f}")
    c.finish(capsys)


def test_verdict_matrix(capsys):
    c = Criterion("verdict matrix", None)
    code = main(["reproduce", "--table1", "--format", "json"])
    out = capsys.readouterr().out
    data = json.loads(out)
    c.check("exit code 0", code == 0, str(code))
    got = {}
    for cell in data["cells"]:
        got.setdefault(cell["example"], {})[cell["operator"]] = cell["dichotomy_on_sample"]
    for ex, (m, mc) in EXPECTED_VERDICTS.items():
        c.check(ex, got.get(ex) == {"M": m, "Mc": mc}, f"{got.get(ex)}")
    c.finish(capsys)
