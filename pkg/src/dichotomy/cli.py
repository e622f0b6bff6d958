"""Command-line entry point: ``dichotomy <subcommand> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 evaluation error,
3 failed claim or verification, 4 no growth witness found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    condition_c_ratio_series,
    select_sectors,
    bump_test_function,
    growth_witness_sequence,
)
from .errors import (
    DichotomyError,
    SelectionFailed,
    VerificationFailed,
    WitnessNotFound,
)
from .gallery import load_preset, run_claims, summarize_verdicts
from .lognum import LogNumber, parse_number
from .maximal import (
    NoncenteredDiscrete,
    Noncentered1D,
    brute_force_discrete_max,
    centered_max_truncated,
    default_metric,
    geometric_endpoints,
    noncentered_max_truncated,
)
from .quadrature import QuadratureSpec
from .space import (
    EX1_F,
    EX3_F,
    EX4_G,
    Constant,
    DiscreteWeights,
    MetricKind,
    StripSteps,
    Tabulated,
    Window,
    axis_heavy_measure,
    ex1_measure,
    ex2_measure,
    ex3_measure,
    ex4_measure,
    ex5_measure,
    load_function_table,
    load_weight_table,
    mirrored,
    parse_point,
    point,
    unit_lattice,
)

OUTPUT_DIR_ENV = "DICHOTOMY_OUTPUT_DIR"

EXIT_OK, EXIT_USAGE, EXIT_EVAL, EXIT_FAILED, EXIT_NOT_FOUND = 0, 1, 2, 3, 4

MEASURE_PRESETS = {
    "ex1": ex1_measure,
    "ex2": ex2_measure,
    "ex3": ex3_measure,
    "ex4": ex4_measure,
    "ex5": ex5_measure,
    "ex2d-unit": lambda: unit_lattice(2),
    "ex1d-unit": lambda: unit_lattice(1),
    "axis-heavy": axis_heavy_measure,
    "axis-heavy-mirrored": lambda: mirrored(axis_heavy_measure()),
}
DEFAULT_FUNCTION = {"ex1": "ex1", "ex2": "ex1", "ex3": "ex3", "ex4": "ex3", "ex5": "ex5"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- value parsing ----------------------------------------------------------------------

def number(text: str):
    """Exact rational, or a float for ``log:<x>`` literals."""
    try:
        v = parse_number(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if v.is_exact:
        e = v.exact
        return int(e) if Fraction(e).denominator == 1 else Fraction(e)
    return float(v)


def real(text: str) -> float:
    return float(number(text))


def radii(text: str) -> list:
    """``a``, ``a:b`` (unit step) or ``a:b:step``, endpoints included."""
    parts = text.split(":")
    if len(parts) == 1:
        out = [number(parts[0])]
        if out[0] <= 0:
            raise argparse.ArgumentTypeError(f"radius must be positive, got {text!r}")
        return out
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"bad radius range {text!r}")
    a, b = number(parts[0]), number(parts[1])
    step = number(parts[2]) if len(parts) == 3 else 1
    if step <= 0 or b < a or a <= 0:
        raise argparse.ArgumentTypeError(f"bad radius range {text!r}")
    out = []
    k = 0
    while a + k * step <= b:
        out.append(a + k * step)
        k += 1
    return out


def point_arg(text: str):
    """Comma-separated coordinates, each an exact decimal or fraction."""
    try:
        return parse_point(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad point {text!r}") from exc


_NEG = re.compile(r"^-[\d.]")
_VALUE_FLAGS = {"--point", "--y0", "--points", "--far-point"}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--point -1,0`` into ``--point=-1,0`` so argparse accepts it."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and _NEG.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


# -- parser --------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--rel-tol", type=real, default=1e-9)
    p.add_argument("--abs-tol", type=real, default=1e-12)
    p.add_argument("--max-depth", type=int, default=40)
    p.add_argument("--log-domain", action="store_true", help="force log-domain quadrature")


def _measure_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--preset", choices=sorted(MEASURE_PRESETS))
    g.add_argument("--weights", help="CSV weight table (n,m,weight or n,weight)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dichotomy", description="Ball averages and truncated maximal functions.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ratio", help="growth ratios mu(B_{r+1}) / mu(B_r)")
    _measure_source(p)
    _common(p)
    p.add_argument("--y0", type=point_arg)
    p.add_argument("--rmin", type=number, default=1)
    p.add_argument("--rmax", type=number, default=12)
    p.add_argument("--r-values", type=radii, help="explicit range a:b[:step]")
    p.add_argument("--tail-fraction", type=real, default=0.25)
    p.add_argument("--metric", choices=("euclidean", "supremum"))

    p = sub.add_parser("maximal", help="truncated centered or non-centered maximal value")
    _measure_source(p)
    _common(p)
    p.add_argument("--function", help="ex1 | ex3 | ex4-g | ex5 | const:<c> | CSV path")
    p.add_argument("--point", type=point_arg, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--centered", action="store_true")
    mode.add_argument("--noncentered", action="store_true")
    p.add_argument("--radii", type=radii, default=None, help="centered radii a:b[:step]")
    p.add_argument("--window", type=int, default=10, help="non-centered lattice window half-width")
    p.add_argument("--max-radius", type=int, help="non-centered lattice radius cap (default: window)")
    p.add_argument("--outer", type=real, default=64.0, help="non-centered 1-D outer endpoint distance")
    p.add_argument("--count", type=int, default=12, help="non-centered 1-D endpoints per side")
    p.add_argument("--metric", choices=("euclidean", "supremum"))

    p = sub.add_parser("reproduce", help="claim checks and the summary matrix")
    _common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--example", choices=("ex1", "ex2", "ex3", "ex4", "ex5"))
    g.add_argument("--table1", action="store_true", help="sampled verdict matrix for EX1..EX4")
    p.add_argument("--nmax", type=int, help="upper end of the N / n range")
    p.add_argument("--depth", type=int, help="EX5 strip depth and n range end")
    p.add_argument("--threshold", type=real, default=1e3)

    p = sub.add_parser("oracle-check", help="fast vs brute-force lattice maxima on random tables")
    _common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--points", type=int, default=5, help="query points per instance")
    p.add_argument("--metric", choices=("euclidean", "supremum"), default="supremum")
    p.add_argument("--corrupt-fast-path", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("thm2", help="growth witness, sector selection and counterexample check")
    _measure_source(p)
    _common(p)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--k-max", type=int)
    p.add_argument("--horizon", type=real, default=40.0)
    p.add_argument("--far-point", type=point_arg)
    return parser


# -- helpers ---------------------------------------------------------------------------------

def _quad(args) -> QuadratureSpec:
    return QuadratureSpec(args.rel_tol, args.abs_tol, args.max_depth, args.log_domain)


def _measure(args):
    if args.weights:
        return load_weight_table(args.weights)
    return MEASURE_PRESETS[args.preset]()


def _function(args, mu):
    spec = args.function or DEFAULT_FUNCTION.get(args.preset or "", None)
    if spec is None:
        return Constant(1)
    named = {"ex1": EX1_F, "ex3": EX3_F, "ex4-g": EX4_G, "ex5": StripSteps()}
    if spec in named:
        return named[spec]
    if spec.startswith("const:"):
        return Constant(number(spec[6:]))
    return load_function_table(spec)


def _metric(args, mu):
    if getattr(args, "metric", None):
        return MetricKind[args.metric.upper()]
    return default_metric(mu)


def _emit(args, text: str) -> None:
    path = args.output
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{args.command}.{args.format}")
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=True)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(header, rows) -> str:
    cells = [[str(h) for h in header]] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _render(args, payload: dict, header, rows) -> str:
    if args.format == "json":
        return _json(payload)
    if args.format == "csv":
        return _csv(header, rows)
    return _table(header, rows)


def _val(v: LogNumber) -> float:
    return float(v)


# -- subcommands -------------------------------------------------------------------------------

def cmd_ratio(args) -> int:
    mu = _measure(args)
    y0 = args.y0 or point(*([0] * mu.dim))
    r_values = args.r_values or radii(f"{args.rmin}:{args.rmax}")
    series = condition_c_ratio_series(mu, y0, r_values, _quad(args), args.tail_fraction, _metric(args, mu))
    payload = series.to_json()
    rows = [[float(r), _val(v), v.log] for r, v in zip(series.r_values, series.ratios)]
    _emit(args, _render(args, payload, ["r", "ratio", "log_ratio"], rows))
    return EXIT_OK


def cmd_maximal(args) -> int:
    mu = _measure(args)
    f = _function(args, mu)
    q = _quad(args)
    x = args.point
    metric = _metric(args, mu)
    if args.noncentered:
        if isinstance(mu, DiscreteWeights):
            fam = NoncenteredDiscrete(Window.square(args.window, mu.dim), args.max_radius or args.window, metric)
        elif mu.dim == 1:
            fam = Noncentered1D(geometric_endpoints(float(x[0]), 0.25, args.outer, args.count))
        else:
            raise UsageError("non-centered mode on continuous planar measures is not exposed here")
        res = noncentered_max_truncated(mu, f, x, fam, q)
        payload = {
            "schema": 1,
            "kind": "maximal",
            "mode": "NONCENTERED",
            "point": [float(c) for c in x],
            "sup": res.sup.to_json(),
            "log_sup": res.sup.log,
            "argmax": res.argmax.to_json(),
            "evaluated_radii": res.evaluated,
        }
        if res.sup.is_exact:
            payload["exact"] = str(res.sup.exact)
        rows = [[float(res.argmax.radius), str(res.argmax.center), _val(res.sup), res.sup.log]]
        _emit(args, _render(args, payload, ["radius", "center", "average", "log_average"], rows))
        return EXIT_OK
    rs = args.radii or list(range(1, 9))
    res = centered_max_truncated(mu, f, x, rs, q, metric)
    payload = {
        "schema": 1,
        "kind": "maximal",
        "mode": "CENTERED",
        "point": [float(c) for c in x],
        "sup": res.sup.to_json(),
        "log_sup": res.sup.log,
        "argmax_radius": float(res.argmax_radius),
        "records": [r.to_json() for r in res.records],
    }
    if res.sup.is_exact:
        payload["exact"] = str(res.sup.exact)
    rows = [
        [float(r.ball.radius), _val(r.mass), _val(r.integral), _val(r.average), r.average.log]
        for r in res.records
    ]
    _emit(args, _render(args, payload, ["radius", "mass", "integral", "average", "log_average"], rows))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    q = _quad(args)
    if args.table1:
        t = summarize_verdicts(q, args.threshold)
        payload = t.to_json()
        rows = [[c.example, c.operator, c.has_dp, c.expected, "".join(c.verdicts)] for c in t.cells]
        text = t.to_table() if args.format == "table" else _render(
            args, payload, ["example", "operator", "dichotomy_on_sample", "expected", "verdicts"], rows
        )
        _emit(args, text)
        if not t.matches:
            bad = [f"{c.example}/{c.operator}" for c in t.cells if not c.matches]
            print(f"table mismatch: {', '.join(bad)}", file=sys.stderr)
            return EXIT_FAILED
        return EXIT_OK
    preset = load_preset(args.example, depth=args.depth or 8)
    params = {}
    if args.nmax is not None:
        for spec in preset.claims:
            if spec.param in ("N", "n"):
                start = spec.default_range[0]
                params[spec.name] = tuple(range(start, args.nmax + 1))
    if args.depth is not None and args.example == "ex5":
        for spec in preset.claims:
            if spec.param == "n":
                params[spec.name] = tuple(range(2, args.depth + 1))
    reports = run_claims(preset, params, q)
    failed = [r for r in reports if not r.passed]
    payload = {
        "schema": 1,
        "kind": "claims",
        "example": preset.id,
        "all_pass": not failed,
        "claims": [r.to_json() for r in reports],
    }
    rows = [
        [r.claim, json.dumps(r.params), r.computed, r.relation, r.bound, r.passed, r.log_domain]
        for r in reports
    ]
    _emit(args, _render(args, payload, ["claim", "params", "computed", "relation", "bound", "pass", "log_domain"], rows))
    for r in failed:
        detail = r.error or f"computed {r.computed} {r.relation} bound {r.bound} is false"
        print(f"FAILED {r.claim} {json.dumps(r.params)}: {detail}", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


def random_instance(rng: np.random.Generator, window: int):
    """Random positive weights and nonnegative values on a square table."""
    w = Window.square(window, 2)
    weights = {p: int(rng.integers(1, 10)) for p in w.points()}
    values = {p: int(rng.integers(0, 5)) for p in w.points()}
    return DiscreteWeights(2, "UNIT", weights), Tabulated(values)


def cmd_oracle_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    metric = MetricKind[args.metric.upper()]
    checked = 0
    for i in range(args.count):
        mu, f = random_instance(rng, args.window)
        win = Window.square(args.window, 2)
        fam = NoncenteredDiscrete(win, args.window, metric)
        for _ in range(args.points):
            x = point(*(int(v) for v in rng.integers(-args.window, args.window + 1, size=2)))
            fast = noncentered_max_truncated(mu, f, x, fam).sup
            if args.corrupt_fast_path:
                fast = fast + LogNumber.of(Fraction(1, 10**6))
            slow = brute_force_discrete_max(mu, f, x, win, args.window, metric)
            checked += 1
            if fast != slow:
                dump = _csv(["n", "m", "weight", "value"],
                            [[*p, w.exact, f.lattice_value(p)] for p, w in sorted(mu.table.items())])
                print(f"disagreement on instance {i} at {x}: fast {fast} vs brute force {slow}",
                      file=sys.stderr)
                sys.stderr.write(dump)
                return EXIT_FAILED
    payload = {"schema": 1, "kind": "oracle_check", "seed": args.seed, "instances": args.count,
               "queries": checked, "window": args.window, "metric": metric.value, "agree": True}
    _emit(args, _render(args, payload, ["seed", "instances", "queries", "agree"],
                        [[args.seed, args.count, checked, True]]))
    return EXIT_OK


def cmd_sectors(args) -> int:
    mu = _measure(args)
    if mu.dim != 2:
        raise UsageError("the growth-witness construction needs a planar measure")
    q = _quad(args)
    k_max = args.k_max or args.depth + 2
    a = growth_witness_sequence(mu, k_max, args.horizon, q)
    w = select_sectors(mu, a, args.depth, q)
    f, report = bump_test_function(mu, w, args.depth, q, far_point=args.far_point)
    payload = {"schema": 1, "kind": "sector_construction", "witness": w.to_json(), "function": f.to_json(),
               "report": report.to_json()}
    rows = [[c["n"], c["radius"], c["average"], c["bound"], c["pass"]] for c in report.lower_checks]
    _emit(args, _render(args, payload, ["n", "radius", "average", "bound", "pass"], rows))
    return EXIT_OK


COMMANDS = {
    "ratio": cmd_ratio,
    "maximal": cmd_maximal,
    "reproduce": cmd_reproduce,
    "oracle-check": cmd_oracle_check,
    "thm2": cmd_sectors,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
        if not 0 < args.rel_tol < 1 or args.abs_tol < 0:
            raise UsageError("tolerances out of range")
    except UsageError as exc:
        print(f"dichotomy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"dichotomy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WitnessNotFound as exc:
        payload = {"schema": 1, "kind": "sector_construction", "status": "NOT_FOUND",
                   "prefix": [float(v) for v in exc.prefix], "message": str(exc)}
        _emit(args, _json(payload))
        print(f"no growth witness: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (SelectionFailed, VerificationFailed) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        report = getattr(exc, "report", None)
        if report is not None:
            _emit(args, _json(report.to_json()))
        return EXIT_FAILED
    except (DichotomyError, ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"evaluation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
