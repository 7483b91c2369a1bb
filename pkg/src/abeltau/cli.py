"""Command-line front end: ``python -m abeltau {solve,sweep,oracle}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 oracle mismatch beyond tolerance.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import load_config
from .errors import (
    CapacityError,
    ConfigError,
    IllPosedTauSystemError,
    QuadratureError,
    SingularStepError,
    UnsupportedInputError,
)
from .problems import example_config
from .series import series_coeffs
from .tau import TauSolver, sup_error

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_ORACLE = 4

THREADS_ENV = "ABELTAU_THREADS"
EXACT_MATCH_TOL = 1e-10


def _fmt(x):
    return f"{x:.6e}"


def _precision_arg(text):
    if text in ("auto", "double"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("precision must be 'auto', 'double' or a digit count") from None


def _n_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad N list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("N list is empty")
    if values != sorted(values):
        raise argparse.ArgumentTypeError("N list must be ascending")
    return values


def _load(args):
    cfg = example_config(args.example) if args.example else load_config(args.config)
    return cfg.to_problem()


def _exact_errors(problem, sol):
    if problem.exact is None:
        return None
    return sup_error(sol.y_n, problem.exact)


def _threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def cmd_solve(args, out):
    problem = _load(args)
    sol = TauSolver(problem, args.precision, n_max=args.n).solve(args.n)
    errs = _exact_errors(problem, sol)
    summary = {
        "problem": problem.name,
        "N": sol.N,
        "precision": "double" if sol.precision is None else f"{sol.precision} digits",
        "system_size": sol.system_size,
        "taus": {f"{j},{i}": v for (j, i), v in sorted(sol.taus.items(), key=lambda kv: (kv[0][1], kv[0][0]))},
        "tau_norms": [float(v) for v in sol.tau_norms],
        "residual": sol.residual_norm,
        "seconds": sol.seconds,
    }
    if errs is not None:
        summary["errors"] = [float(e) for e in errs]
        summary["exact_match"] = bool(np.all(errs <= EXACT_MATCH_TOL))
    if args.json:
        out.write(json.dumps(summary, indent=2) + "\n")
    else:
        out.write(f"problem    {summary['problem']}\n")
        out.write(f"N          {sol.N}\n")
        out.write(f"precision  {summary['precision']}\n")
        out.write(f"tau system {sol.system_size} x {sol.system_size}\n")
        for (j, i), v in sorted(sol.taus.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            out.write(f"tau[{j},{i}]  {_fmt(v)}\n")
        out.write("tau norms  " + " ".join(_fmt(v) for v in sol.tau_norms) + "\n")
        out.write(f"residual   {_fmt(sol.residual_norm)}\n")
        if errs is not None:
            out.write("sup errors " + " ".join(_fmt(e) for e in errs) + "\n")
            out.write(f"exact match {'yes' if summary['exact_match'] else 'no'}\n")
    if args.dump:
        out.write("# component,index,coefficient  (Y_N = sum c t^(index*sigma))\n")
        coeffs = sol.y_n.coeffs
        for i in range(coeffs.shape[0]):
            for l in range(coeffs.shape[1]):
                out.write(f"{i + 1},{l},{_fmt(float(coeffs[i, l]))}\n")
    return EXIT_OK


def sweep_rows(problem, n_list, precision="auto", threads=1, timing=True):
    """Solve for each N (sharing one canonical table) and return report rows."""
    solver = TauSolver(problem, precision, n_max=max(n_list))
    solver.prepare(max(n_list))
    for N in n_list:
        solver.forcing_coeffs(N)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            sols = list(pool.map(solver.solve, n_list))
    else:
        sols = [solver.solve(N) for N in n_list]
    rows = []
    for sol in sorted(sols, key=lambda s: s.N):
        errs = _exact_errors(problem, sol)
        if errs is None:
            errs = np.full(problem.n, np.nan)
        rows.append((sol.N, *map(float, errs), *map(float, sol.tau_norms), sol.residual_norm, sol.seconds if timing else 0.0))
    return rows


def format_csv(rows, n):
    header = ["N", *(f"e{i}" for i in range(1, n + 1)), *(f"tau{i}" for i in range(1, n + 1)), "residual", "seconds"]
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join([str(r[0]), *(_fmt(v) for v in r[1:])]) + "\n")
    return buf.getvalue()


def format_table(rows, n):
    header = ["N", *(f"||e{i}||" for i in range(1, n + 1)), *(f"||tau{i}||" for i in range(1, n + 1)), "residual", "seconds"]
    lines = ["  ".join(f"{h:>12}" for h in header)]
    for r in rows:
        lines.append("  ".join([f"{r[0]:>12d}", *(f"{_fmt(v):>12}" for v in r[1:])]))
    return "\n".join(lines) + "\n"


def cmd_sweep(args, out):
    problem = _load(args)
    rows = sweep_rows(problem, args.n_list, args.precision, _threads(), timing=not args.no_timing)
    csv_text = format_csv(rows, problem.n)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
        out.write(format_table(rows, problem.n))
    else:
        out.write(csv_text)
    return EXIT_OK


def oracle_check(problem, N, M, tol=None, precision="auto", points=201):
    """Compare the Tau solution with the truncated series on ``[0, min eps / 2]``."""
    sol = TauSolver(problem, precision, n_max=N).solve(N)
    ser = series_coeffs(problem, M)
    w = ser.window
    t = np.linspace(0.0, w, points)
    disc = float(np.max(np.abs(sol.y_n(t) - ser(t))))
    if tol is None:
        errs = _exact_errors(problem, sol)
        estimate = float(np.max(errs)) if errs is not None else float(np.max(sol.tau_norms))
        tol = max(10.0 * estimate, 1e-8)
    return {"window": w, "discrepancy": disc, "tolerance": tol, "passed": disc <= tol, "radius": ser.radius}


def cmd_oracle(args, out):
    problem = _load(args)
    rep = oracle_check(problem, args.n, args.m, args.tol, args.precision)
    if args.json:
        out.write(json.dumps({**rep, "radius": [float(r) for r in rep["radius"]]}, indent=2) + "\n")
    else:
        out.write(f"window      [0, {_fmt(rep['window'])}]\n")
        out.write(f"discrepancy {_fmt(rep['discrepancy'])}\n")
        out.write(f"tolerance   {_fmt(rep['tolerance'])}\n")
        out.write(f"result      {'PASS' if rep['passed'] else 'FAIL'}\n")
    return EXIT_OK if rep["passed"] else EXIT_ORACLE


def build_parser():
    parser = argparse.ArgumentParser(prog="abeltau", description="Recursive Tau solver for Abel-Volterra systems")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="problem configuration file")
        src.add_argument("--example", type=int, choices=[1, 2, 3, 4], help="built-in example")
        p.add_argument("--precision", type=_precision_arg, default="auto", help="auto, double or decimal digits")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("solve", help="solve at one N")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dump", action="store_true", help="print Y_N coefficients")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="solve for a list of N and tabulate")
    common(p)
    p.add_argument("--n-list", type=_n_list, required=True, help="ascending, comma separated")
    p.add_argument("--out", help="write CSV here and print an aligned table")
    p.add_argument("--no-timing", action="store_true", help="write 0 in the seconds column")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="cross-check against the series solution")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=60)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ConfigError, UnsupportedInputError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularStepError, IllPosedTauSystemError, QuadratureError, CapacityError) as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
