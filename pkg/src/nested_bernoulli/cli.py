"""Command-line front end.

Data goes to stdout (or --out), diagnostics to stderr.  Exit codes: 0 ok,
1 a verification check failed, 2 usage or domain error, 3 the fixed-point
bracket could not be found.
"""

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .dynamics import MAX_STEPS, iterate, pn_map
from .fixedpoint import DEFAULT_TOL, BracketingError, solve
from .specfun import DomainError
from .verify.harness import TARGETS
from .verify.oracles import exact_pmf, expected_count, simulate_stage1, thread_count
from .verify.rates import geometric_grid

__all__ = ["main", "build_parser", "parse_probability", "parse_grid", "cobweb_rows"]

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BRACKET = 3


def parse_probability(text):
    """'a/b' or a decimal string, as an exact Fraction in [0, 1]."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational or decimal number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return value


def parse_grid(spec):
    """Integer n-grid from 'min:max:geoK', 'a..b', or a comma list."""
    spec = spec.strip()
    try:
        if ":" in spec:
            lo, hi, geo = spec.split(":")
            if not geo.startswith("geo"):
                raise ValueError
            grid = geometric_grid(int(float(lo)), int(float(hi)), int(geo[3:]))
        elif ".." in spec:
            a, b = spec.split("..")
            grid = list(range(int(a), int(b) + 1))
        else:
            grid = [int(float(tok)) for tok in spec.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad grid spec {spec!r}; use min:max:geoK, a..b or a comma list"
        ) from None
    if not grid or min(grid) < 1:
        raise argparse.ArgumentTypeError(f"grid {spec!r} must contain positive integers")
    return grid


def _positive_int(text):
    value = int(float(text))
    if value < 1 or value != float(text):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=_nonneg_int, default=42)

    parser = argparse.ArgumentParser(
        prog="nested-bernoulli",
        description="Nested Bernoulli trial probabilities p_{k,n} and their fixed point p_n.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("compute", parents=[common], help="iterate p_{k,n} = P_n(p_{k-1,n})")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p0", type=parse_probability, required=True)
    p.add_argument("--k-max", type=_nonneg_int, default=20)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("fixed-point", parents=[common], help="solve p_n = P_n(p_n)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=_positive_int)
    group.add_argument("--n-grid", type=parse_grid)
    p.set_defaults(func=cmd_fixed_point)

    p = sub.add_parser("verify", parents=[common], help="run certification checks")
    p.add_argument("target", choices=(*TARGETS, "all"))
    p.add_argument("--k-max", type=_positive_int, default=5, help="theorem1: stages to fit")
    p.add_argument("--n-max", type=_positive_int, default=None, help="lemmas/oracles: largest n")
    p.add_argument("--p", type=parse_probability, default=Fraction(3, 10), help="theorem1: p_{0,n}")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo stage-1 frequency")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p", type=parse_probability, required=True)
    p.add_argument("--trials", type=_positive_int, default=1_000_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figure", parents=[common], help="cobweb data for P_n")
    p.add_argument("--n", type=_positive_int, default=10)
    p.add_argument("--p0", type=parse_probability, default=Fraction(15, 100))
    p.add_argument("--steps", type=_nonneg_int, default=20)
    p.add_argument("--curve-points", type=_positive_int, default=201)
    p.set_defaults(func=cmd_figure)
    return parser


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _config(args):
    return _jsonable({k: v for k, v in vars(args).items() if k not in ("func", "out", "format")})


def _csv_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(args, header, rows, checks=(), records=None):
    """Write rows as CSV (header + rows) or one JSON object.

    In JSON mode ``records``, when given, replaces the rows under "results".
    """
    if args.format == "json":
        results = records if records is not None else [dict(zip(header, row)) for row in rows]
        payload = {
            "config": _config(args),
            "results": results,
            "checks": _jsonable(list(checks)),
        }
        text = json.dumps(_jsonable(payload), indent=2, allow_nan=False) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args):
    trace = iterate(args.n, float(args.p0), args.k_max)
    _emit(args, ("k", "p"), [(k, p.value) for k, p in trace.entries])
    return 0


def cmd_fixed_point(args):
    grid = args.n_grid if args.n_grid is not None else [args.n]
    tol = min(args.tol, 1e-6)
    workers = min(thread_count(), len(grid))
    try:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda n: solve(n, tol), grid))
        else:
            results = [solve(n, tol) for n in grid]
    except BracketingError as exc:
        print(f"fixed-point: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    header = ("n", "p_n", "residual", "derivative", "iterations", "bracket_lo", "bracket_hi")
    rows = [
        (r.n, r.p_n.value, r.residual, r.derivative_at_fp, r.iterations, r.bracket[0], r.bracket[1])
        for r in results
    ]
    _emit(args, header, rows)
    return 0


def _target_kwargs(name, args):
    if name == "theorem1":
        return {"k_max": args.k_max, "p": float(args.p)}
    if name == "theorem2":
        return {"tol": min(args.tol, 1e-6)}
    if name in ("lemmas", "oracles") and args.n_max is not None:
        return {"n_max": args.n_max}
    return {}


def cmd_verify(args):
    names = list(TARGETS) if args.target == "all" else [args.target]
    checks, records = [], []
    for name in names:
        results, target_checks = TARGETS[name](**_target_kwargs(name, args))
        records.extend({"target": name, **_jsonable(r)} for r in results)
        checks.extend(target_checks)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"FAIL {c.name}: value={c.value!r} threshold={c.threshold!r}", file=sys.stderr)
    print(f"verify {args.target}: {len(checks) - len(failed)}/{len(checks)} checks passed", file=sys.stderr)
    rows = [(c.name, c.value, c.threshold, c.passed) for c in checks]
    _emit(args, ("check", "value", "threshold", "passed"), rows, checks, records)
    return EXIT_CHECK_FAILED if failed else 0


def cmd_simulate(args):
    p = args.p
    try:
        m = expected_count(args.n, p.numerator, p.denominator)
    except DomainError as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    est = simulate_stage1(args.n, p.numerator, p.denominator, args.trials, args.seed)
    exact = float(exact_pmf(args.n, m, p.numerator, p.denominator))
    header = ("n", "p", "m", "trials", "seed", "hits", "frequency", "std_error", "exact_pmf")
    row = (args.n, str(p), m, est.trials, est.seed, est.hits, est.frequency, est.std_error, exact)
    _emit(args, header, [row])
    return 0


def cobweb_rows(n, p0, steps, curve_points=201):
    """(segment, x, y) rows: the curve P_n, the diagonal, then the cobweb path.

    The cobweb starts on the diagonal at (p0, p0) and alternates a vertical
    move to (x, P_n(x)) with a horizontal move back to the diagonal.
    """
    rows = []
    for j in range(curve_points):
        x = j / (curve_points - 1) if curve_points > 1 else 0.5
        rows.append(("curve", x, pn_map(n, x).value))
    rows.append(("diagonal", 0.0, 0.0))
    rows.append(("diagonal", 1.0, 1.0))
    if steps == 0:
        return rows
    x = float(p0)
    rows.append(("cobweb", x, x))
    for _ in range(steps):
        y = pn_map(n, x).value
        rows.append(("cobweb", x, y))
        rows.append(("cobweb", y, y))
        x = y
    return rows


def cmd_figure(args):
    if args.steps > MAX_STEPS:
        print(f"figure: steps must not exceed {MAX_STEPS}", file=sys.stderr)
        return EXIT_USAGE
    rows = cobweb_rows(args.n, args.p0, args.steps, args.curve_points)
    _emit(args, ("segment", "x", "y"), rows)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if "NBT_THREADS" in os.environ:
        try:
            thread_count()
        except ValueError as exc:
            parser.error(str(exc))
    try:
        return args.func(args)
    except (DomainError, ValueError) as exc:
        print(f"{args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
