"""Command-line entry point: ``fracheat {solve,error,classify,verify}``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 singular linear system.
"""

import argparse
import csv
import os
import sys
import tempfile
import time

import numpy as np

from . import lie, solver
from .erdelyi_kober import verify_space_identity, verify_time_identity
from .fractional import AXES, PolySum3
from .linalg import SingularMatrixError

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_SINGULAR = 0, 1, 2, 3

DEFAULT_F = solver.example_source().serialize()
DEFAULT_EXACT = solver.example_exact().serialize()


def _err(msg):
    print(f"fracheat: {msg}", file=sys.stderr)


def _parse_terms(text, what):
    try:
        return PolySum3.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad {what} terms {text!r}: {exc}") from exc


def _parse_slice(text):
    axis, sep, value = text.partition("=")
    axis = axis.strip()
    if not sep or axis not in AXES:
        raise argparse.ArgumentTypeError(f"slice must look like t=0.5 (axis in {AXES}), got {text!r}")
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"slice value is not a number: {value!r}") from None
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError(f"slice value must lie in [0, 1], got {v}")
    return axis, v


def _positive_int(text):
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("grid needs at least two points per axis")
    return n


def _fmt(rows):
    return [[format(float(v), ".17g") for v in row] for row in rows]


def _emit_csv(path, header, rows):
    """Write string rows to ``path`` atomically, or to stdout when ``path`` is None."""
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _problem(args):
    return solver.ProblemSpec(args.alpha, args.beta, args.M, _parse_terms(args.f, "source"))


def cmd_solve(args):
    start = time.perf_counter()
    sol = solver.solve(_problem(args))
    grid = solver.volume_grid(sol, args.grid_n)
    _emit_csv(args.out, ["t", "x", "y", "u"], _fmt(grid))
    if args.dump_matrices:
        sol.ops.dump_csv(args.dump_matrices)
    elapsed = time.perf_counter() - start
    print(f"residual_max={sol.residual:.3e} wall_time={elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK


def cmd_error(args):
    sol = solver.solve(_problem(args))
    exact = _parse_terms(args.exact, "exact-solution")
    axis, value = args.slice
    table = solver.error_grid(sol, exact, axis, value, args.grid_n)
    _emit_csv(args.out, ["coord1", "coord2", "value"], _fmt(table))
    print(f"max_error={np.max(table[:, 2]):.6e}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args):
    X = lie.LieElement(args.coeffs, args.alpha, args.beta)
    form = lie.classify(X, eps=args.eps)
    rep = " ".join(format(v, ".12g") for v in form.representative.a)
    print(f"case: {form.case_id}")
    print(f"representative: {rep}")
    print(f"generator: {form.representative}")
    print(f"word: {form.word}")
    return EXIT_OK


def _adjoint_rows(alpha, beta, tol, corrupt):
    C = lie.structure_constants(alpha, beta)
    if corrupt:
        C[0, 4, 0] *= 1.001
    rows = []
    for i in range(1, lie.DIM + 1):
        for s in np.linspace(-1.0, 1.0, 21):
            closed = lie.adjoint(i, s, alpha, beta)
            series = lie.lie_series(i, s, alpha, beta, C=C)
            diff = float(np.max(np.abs(closed - series)))
            rows.append((f"i={i};s={s:.2f}", np.linalg.norm(closed), np.linalg.norm(series), diff))
    return rows, tol


def _reduction_rows(tol, corrupt):
    rows = []
    point = (0.5, 0.6, 0.7)
    for alpha in (0.6, 0.8, 1.0):
        for beta in (0.5, 1.5, 2.0):
            for p, q in ((0.0, 0.0), (0.2, 0.1), (0.3, 0.0), (0.0, 0.25)):
                checks = []
                if (p + q) * beta / alpha < 1:
                    checks.append(("time", verify_time_identity))
                checks.append(("space", verify_space_identity))
                for name, fn in checks:
                    res = fn(p, q, alpha, beta, *point, tol=tol, literal=corrupt)
                    case = f"{name};alpha={alpha};beta={beta};p={p};q={q}"
                    rows.append((case, res.lhs, res.rhs, res.abs_diff))
    return rows, tol


def cmd_verify(args):
    if args.kind == "adjoint":
        tol = 1e-12 if args.tol is None else args.tol
        rows, tol = _adjoint_rows(args.alpha, args.beta, tol, args.corrupt)
    else:
        tol = 1e-6 if args.tol is None else args.tol
        rows, tol = _reduction_rows(tol, args.corrupt)
    failed = 0
    table = []
    for case, lhs, rhs, diff in rows:
        ok = bool(diff <= tol)
        failed += not ok
        table.append([case, format(lhs, ".17g"), format(rhs, ".17g"), format(diff, ".3e"),
                      "pass" if ok else "fail"])
    _emit_csv(args.out, ["case", "lhs", "rhs", "diff", "pass"], table)
    print(f"{len(rows) - failed}/{len(rows)} checks passed at tol {tol:.1e}", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def _add_problem_args(p):
    p.add_argument("--alpha", type=float, default=1.0, help="time order in (0, 1]")
    p.add_argument("--beta", type=float, default=2.0, help="space order in (0, 2]")
    p.add_argument("--M", type=int, default=4, help="Bernstein degree (1..12)")
    p.add_argument("--f", default=DEFAULT_F, help='source terms "c,p,q,r;..." (c t^p x^q y^r)')
    p.add_argument("--grid-n", type=_positive_int, default=11, help="points per axis")
    p.add_argument("--out", help="CSV output path (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="fracheat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve and tabulate u on a uniform grid")
    _add_problem_args(p)
    p.add_argument("--dump-matrices", metavar="DIR", help="also write the operational matrices")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("error", help="absolute error against an exact solution on a slice")
    _add_problem_args(p)
    p.add_argument("--exact", default=DEFAULT_EXACT, help="exact solution terms")
    p.add_argument("--slice", type=_parse_slice, default=("t", 0.5), help="e.g. t=0.5")
    p.set_defaults(func=cmd_error)

    p = sub.add_parser("classify", help="reduce a generator to its optimal-system case")
    p.add_argument("coeffs", type=float, nargs=5, metavar="a", help="a1 .. a5")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1e-12, help="zero threshold")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run a sweep of numerical identity checks")
    p.add_argument("kind", choices=("adjoint", "reduction"))
    p.add_argument("--alpha", type=float, default=0.7, help="structure parameter (adjoint)")
    p.add_argument("--beta", type=float, default=1.3, help="structure parameter (adjoint)")
    p.add_argument("--tol", type=float, help="pass threshold (1e-12 adjoint, 1e-6 reduction)")
    p.add_argument("--corrupt", action="store_true", help="negative control: checks must fail")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        _err(str(exc))
        return EXIT_INVALID
    except SingularMatrixError as exc:
        _err(f"singular system: {exc}")
        return EXIT_SINGULAR
    except (ValueError, TypeError, MemoryError) as exc:
        _err(str(exc))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
