"""Acceptance gate: ten criteria, each printing one PASS/FAIL line.

The lines are also collected in ``RESULTS`` and echoed by the terminal
summary hook in conftest.py, so they show up without ``-s``.
"""
import math
import time
from fractions import Fraction

import mpmath
import numpy as np

from abeltau.basis import muntz_legendre, muntz_norm, muntz_values
from abeltau.canonical import generate, init_canonicals, verify_entry
from abeltau.cli import oracle_check
from abeltau.operator import build_lambda_set
from abeltau.problems import example
from abeltau.tau import TauSolver, solve, sup_error

from oracles import abel_integral, jacobi_explicit

RESULTS = []

BAND = 100.0
FLOOR = 5e-12

REF_EX3_N = [4, 8, 10, 12, 14, 16, 18, 20]
REF_EX3 = {
    "e1": [1.41e-03, 8.27e-06, 2.19e-07, 1.27e-07, 2.12e-08, 1.14e-09, 1.26e-10, 7.38e-12],
    "e2": [2.58e-03, 3.88e-04, 4.75e-06, 8.64e-06, 4.85e-06, 3.65e-08, 9.19e-09, 2.25e-10],
    "tau1": [1.33e-03, 9.57e-06, 5.71e-07, 2.00e-08, 6.63e-09, 1.09e-10, 2.51e-11, 2.75e-12],
    "tau2": [3.40e-04, 9.66e-06, 5.73e-07, 4.94e-08, 1.18e-08, 1.10e-10, 2.54e-11, 2.76e-12],
}
REF_EX4_N = [2, 4, 6, 8, 10, 12, 14]
REF_EX4 = {
    "e1": [3.06e-2, 1.17e-3, 2.06e-4, 1.19e-6, 3.89e-7, 3.51e-9, 2.85e-10],
    "e2": [5.08e-3, 3.24e-3, 5.41e-4, 9.43e-6, 2.19e-7, 8.72e-9, 3.06e-12],
    "tau1": [7.64e-3, 1.95e-4, 2.58e-4, 1.19e-7, 3.24e-8, 2.51e-10, 1.78e-11],
    "tau2": [1.27e-3, 5.41e-4, 6.76e-6, 9.43e-7, 1.83e-8, 6.02e-10, 1.79e-11],
}


def report(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def sweep(problem, ns):
    t0 = time.perf_counter()
    solver = TauSolver(problem, n_max=max(ns))
    cols = {"e1": [], "e2": [], "tau1": [], "tau2": []}
    for N in ns:
        sol = solver.solve(N)
        e = sup_error(sol, problem.exact)
        cols["e1"].append(float(e[0]))
        cols["e2"].append(float(e[1]))
        cols["tau1"].append(float(sol.tau_norms[0]))
        cols["tau2"].append(float(sol.tau_norms[1]))
    return cols, time.perf_counter() - t0


def band_failures(ns, ours, ref_vals):
    bad = []
    for N, x, p in zip(ns, ours, ref_vals):
        ref = max(p, FLOOR)
        if not (ref / BAND <= x <= BAND * ref):
            bad.append(f"N={N}: {x:.2e} vs {p:.2e} (x{x / ref:.0f})")
    return bad


def decay_failures(ns, ours):
    return [f"N={ns[k]}: {ours[k]:.2e} > 10 x {ours[k - 2]:.2e}" for k in range(2, len(ours)) if ours[k] > 10 * ours[k - 2]]


def table_criterion(k, problem, ns, table, limit):
    cols, secs = sweep(problem, ns)
    problems = []
    for name, ref_vals in table.items():
        problems += [f"{name} {m}" for m in band_failures(ns, cols[name], ref_vals)]
        problems += [f"{name} decay {m}" for m in decay_failures(ns, cols[name])]
    ok = not problems and secs < limit
    detail = f"{secs:.1f}s; " + ("; ".join(problems) if problems else "all four columns within x100 and decaying")
    report(k, ok, detail)
    return ok, problems, secs


def test_criterion_01_example1_exact():
    p = example(1)
    t0 = time.perf_counter()
    sol = solve(p, 6)
    secs = time.perf_counter() - t0
    taus = np.abs(sol.tau_vector)
    err = float(np.max(sup_error(sol, p.exact)))
    ok = report(1, taus.max() <= 1e-12 and err <= 1e-11 and secs < 1.0,
                f"max|tau| = {taus.max():.1e}, sup error = {err:.1e}, {secs:.2f}s")
    assert ok


def test_criterion_02_example2_exact():
    p = example(2)
    t0 = time.perf_counter()
    sol = solve(p, 10)
    secs = time.perf_counter() - t0
    taus = np.abs(sol.tau_vector)
    err = float(np.max(sup_error(sol, p.exact)))
    ok = report(2, taus.max() <= 1e-10 and err <= 1e-10 and secs < 1.0,
                f"max|tau| = {taus.max():.1e}, sup error = {err:.1e}, {secs:.2f}s")
    assert ok


def test_criterion_03_example3_sweep():
    ok, problems, secs = table_criterion(3, example(3), REF_EX3_N, REF_EX3, 30.0)
    assert ok, problems


def test_criterion_04_example4_sweep():
    ok, problems, secs = table_criterion(4, example(4), REF_EX4_N, REF_EX4, 30.0)
    assert ok, problems


def test_criterion_05_defining_relation():
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for k in (1, 2, 3, 4):
        ls = build_lambda_set(example(k), 40)
        table = generate(init_canonicals(ls), 25, ls)
        for (i, j) in table.q_table:
            worst = max(worst, verify_entry(table, i, j, ls, tol=1e-10))
            count += 1
    secs = time.perf_counter() - t0
    ok = report(5, worst <= 1e-10 and secs < 10.0, f"{count} entries, worst relative defect {worst:.1e}, {secs:.1f}s")
    assert ok


def test_criterion_06_heights():
    got = {}
    for k in (1, 3, 4):
        ls = build_lambda_set(example(k), 8)
        got[k] = (ls.heights.tolist(), ls.offsets.tolist(), ls.pair_heights.tolist())
    ok = (
        got[1][0] == [1, 1] and got[1][1] == [0, 0]
        and got[3][0] == [3, 2] and got[3][1] == [1, 0]
        and got[4][0] == [1, 1] and got[4][2][1][1] == 0
    )
    report(6, ok, f"ex1 h={got[1][0]} D={got[1][1]}; ex3 h={got[3][0]} D={got[3][1]}; ex4 h={got[4][0]} h22={got[4][2][1][1]}")
    assert ok


def test_criterion_07_lambda_quadrature():
    p = example(1)
    ls = build_lambda_set(p, 8)
    rng = np.random.default_rng(2024)
    ts = rng.uniform(0.0, 1.0, 10)
    worst = 0.0
    for i in range(2):
        for j in range(2):
            kern = p.kernels[i][j]
            if kern.is_zero:
                continue
            c = float(kern.coeffs[0, 0])
            a = float(p.alphas[i][j])
            lam = np.asarray(ls.lambdas[i][j], dtype=float)
            for r in range(7):
                for t in ts:
                    X = t ** (np.arange(ls.cols) * 0.25)
                    got = lam[r] @ X
                    ref = c * abel_integral(lambda s: s ** (mpmath.mpf(r) / 4), t, a)
                    worst = max(worst, abs(got - ref) / abs(ref))
    ok = report(7, worst <= 1e-8, f"worst relative mismatch {worst:.1e} over 3 kernels x 7 rows x 10 t")
    assert ok


def test_criterion_08_basis():
    worst_coef = 0.0
    worst_orth = 0.0
    for sigma in (Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 5)):
        g = sigma.denominator
        b = muntz_legendre(30, sigma)
        for i in range(31):
            exact = np.array([float(c) for c in jacobi_explicit(i, g - 1)])
            got = np.asarray(b.polys[i].coeffs, dtype=float)
            worst_coef = max(worst_coef, np.max(np.abs(got - exact)) / np.max(np.abs(exact)))
        # Gram matrix of the normalised family, evaluated in value space
        x, w = np.polynomial.legendre.leggauss(48)
        s = (x + 1) / 2
        t = s**g
        wt = w / 2 * g * s ** (g - 1)
        V = muntz_values(30, sigma, t)
        norms = np.array([muntz_norm(i, sigma) for i in range(31)])
        Vn = V / np.sqrt(norms)[:, None]
        gram = (Vn * wt) @ Vn.T
        worst_orth = max(worst_orth, np.max(np.abs(gram - np.eye(31))))
    ok = report(8, worst_coef <= 1e-10 and worst_orth <= 1e-9,
                f"recurrence vs explicit {worst_coef:.1e} (relative to coefficient scale), orthogonality {worst_orth:.1e}")
    assert ok


def test_criterion_09_oracle_equivalence():
    lines = []
    ok = True
    for k, N in ((1, 6), (2, 10), (3, 12)):
        rep = oracle_check(example(k), N, 60)
        sol = solve(example(k), N)
        tol = max(10 * float(np.max(sup_error(sol, example(k).exact))), 1e-8)
        passed = rep["discrepancy"] <= tol
        ok &= passed
        lines.append(f"ex{k} N={N}: {rep['discrepancy']:.1e} <= {tol:.1e} on [0, {rep['window']:.1e}]")
    report(9, ok, "; ".join(lines))
    assert ok


def test_criterion_10_tau_decay_tracks_error():
    cols, _ = sweep(example(3), REF_EX3_N)
    dt = math.log10(cols["tau1"][0]) - math.log10(cols["tau1"][-1])
    de = math.log10(cols["e1"][0]) - math.log10(cols["e1"][-1])
    ratio = dt / de
    ok = report(10, 1 / 3 <= ratio <= 3, f"decades tau1 {dt:.2f}, e1 {de:.2f}, ratio {ratio:.2f}")
    assert ok
