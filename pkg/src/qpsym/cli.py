"""Command-line front end.

Exit codes: 0 success, 2 unreadable or malformed input, 3 the constraint sum
is not positive definite, 4 search budget exceeded, 5 report does not match
the problem file.
"""

import argparse
import dataclasses
import sys

import numpy as np

from . import apply
from .errors import AssumptionViolated, DimensionError, SearchBudgetExceeded
from .fileio import ProblemFileError, dumps_report, read_problem_file, read_report
from .group import analyze
from .problem import build_problem

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_ASSUMPTION = 3
EXIT_BUDGET = 4
EXIT_MISMATCH = 5


def _fmt(x):
    return repr(float(x))


def _load(path):
    objective, constraints, tol, opts = read_problem_file(path)
    return build_problem(objective, constraints, tol), tol, opts


def cmd_validate(args, out):
    problem, _, _ = _load(args.path)
    print(f"n={problem.n} M={problem.m}", file=out)
    print(f"B_Σ positive definite, min pivot {_fmt(problem.min_pivot)}", file=out)
    return EXIT_OK


def cmd_analyze(args, out):
    problem, tol, opts = _load(args.path)
    tol_changes = {}
    if args.tol_residual is not None:
        tol_changes["residual_tol"] = args.tol_residual
    if args.tol_rank is not None:
        tol_changes["rank_tol"] = args.tol_rank
    tol = dataclasses.replace(tol, **tol_changes)
    opt_changes = {}
    for flag, name in (("seed", "seed"), ("restarts", "restarts"), ("max_perms", "max_permutations")):
        value = getattr(args, flag)
        if value is not None:
            opt_changes[name] = value
    opts = dataclasses.replace(opts, **opt_changes)
    report = analyze(problem, opts, tol, constraints_only=args.constraints_only)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(dumps_report(report))
    print(report.summary(), file=out)
    for rec in report.cosets:
        print(
            f"  coset {rec.index}: det {rec.det_sign:+d} permutation {list(rec.permutation)} "
            f"residual {rec.coset.residual:.3g}",
            file=out,
        )
    if report.duplicates:
        print(f"  cosets shared across permutations: {[list(d) for d in report.duplicates]}", file=out)
    return EXIT_OK


def _load_matching(args):
    problem, tol, _ = _load(args.path)
    report = read_report(args.report)
    if report.problem_digest != problem.digest():
        raise _Mismatch(f"report {args.report} was computed for a different problem")
    return problem, report


class _Mismatch(Exception):
    pass


def _parse_point(text, n):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ProblemFileError(f"bad point {text!r}: {exc}") from exc
    if len(values) != n or not np.all(np.isfinite(values)):
        raise ProblemFileError(f"point must have {n} finite coordinates")
    return np.array(values)


def cmd_orbit(args, out):
    problem, report = _load_matching(args)
    x = _parse_point(args.point, problem.n)
    orb = apply.orbit(x, report, continuous_samples=args.samples, seed=args.seed)
    for y, tag in zip(orb.points, orb.tags):
        print(" ".join(_fmt(v) for v in y) + "\t" + tag, file=out)
    return EXIT_OK


def cmd_cuts(args, out):
    _, report = _load_matching(args)
    for cut in apply.cuts(report, report.tolerances):
        print(f"coset {cut.coset}: " + " ".join(_fmt(v) for v in cut.normal), file=out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="qpsym", description="Linear symmetry groups of quadratic programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a problem file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="compute the symmetry group")
    p.add_argument("path")
    p.add_argument("--constraints-only", action="store_true", help="ignore the objective matrix")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--tol-residual", type=float)
    p.add_argument("--tol-rank", type=float)
    p.add_argument("--max-perms", type=int)
    p.add_argument("--json", metavar="OUT", help="write the report document here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("orbit", help="images of a point under the group")
    p.add_argument("path")
    p.add_argument("report")
    p.add_argument("point", help="comma-separated coordinates")
    p.add_argument("--samples", type=int, default=0, help="continuous samples per coset")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("cuts", help="symmetry-breaking cut normals")
    p.add_argument("path")
    p.add_argument("report")
    p.set_defaults(func=cmd_cuts)
    return parser


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except (OSError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except AssumptionViolated as exc:
        print(f"error: assumption violated: {exc}", file=err)
        return EXIT_ASSUMPTION
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=err)
        return EXIT_BUDGET
    except _Mismatch as exc:
        print(f"error: {exc}", file=err)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
