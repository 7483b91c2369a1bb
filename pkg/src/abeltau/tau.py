"""Recursive Tau solver built on the canonical table.

Given ``G ~ sum_l g_{l,i} t**(l sigma) e_i``, the Tau solution is

    Y_N = sum_i sum_l g_{l,i} Q_i^l + sum_i sum_{j=N+1}^{N+h_i} tau_{j,i} sum_l c_{j,l} Q_i^l

where ``c_{j,l}`` are the coefficients of the orthonormal Muntz-Legendre
polynomial ``p_j``. The tau parameters make the total residual vanish, a
square system of size ``sum h_i`` independent of ``N``.

Coefficients of ``p_j`` grow roughly like ``(3 + 2 sqrt 2)**j``, so assembling
``Y_N`` cancels that many digits. ``precision="auto"`` switches to mpmath
arithmetic once the expected loss exceeds what double precision can absorb.
"""
from __future__ import annotations

import logging
import math
import threading
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from ._field import DOUBLE, make_field, to_field
from .basis import JacobiParams, jacobi_coeffs, muntz_legendre, project
from .canonical import generate, init_canonicals
from .errors import AbelTauError, IllPosedTauSystemError
from .fracpoly import FracPoly, FracPolyVec, _abs_max, _pad_to
from .operator import apply_L, build_lambda_set

__all__ = [
    "TauSolution",
    "TauSolver",
    "choose_precision",
    "expand_forcing",
    "assemble_tau_system",
    "solve",
    "sup_error",
    "tau_decay_report",
]

log = logging.getLogger(__name__)

PIVOT_TOL = 1e-12
RESIDUAL_TOL = 1e-10
DOUBLE_DIGIT_BUDGET = 8
GRID = 1001


def choose_precision(problem, N, precision="auto"):
    """Decimal digits for the mpmath field, or None for double precision.

    ``auto`` estimates the digits cancelled while assembling ``Y_N`` as
    ``log10 sum_l |c_{J,l}|`` with ``J = N + max h`` (upper bound on heights:
    max delta + kernel degree) and keeps double while that is at most 8.
    """
    if precision == "double" or precision is None:
        return None
    if isinstance(precision, int) and not isinstance(precision, bool):
        if precision < 16:
            raise ValueError("explicit precision must be at least 16 digits")
        return precision
    if precision != "auto":
        raise ValueError(f"precision must be 'auto', 'double' or an int, got {precision!r}")
    hmax = max(max(r) for r in problem.deltas) + problem.kernel_degree
    J = N + hmax
    g = problem.gamma
    z = jacobi_coeffs(J, JacobiParams(0.0, g - 1.0))
    digits = math.log10(float(np.sum(np.abs(z))) + 1.0)
    if digits <= DOUBLE_DIGIT_BUDGET:
        return None
    return 20 + 2 * math.ceil(digits)


def expand_forcing(problem, N, field=DOUBLE, basis=None):
    """Coefficient array ``g[i, l]`` of the forcing.

    FracPoly components are passed through exactly, including any indices
    beyond ``N``; callables are projected onto ``L_0..L_N``.
    """
    rows = []
    for g in problem.forcing:
        if isinstance(g, FracPoly):
            rows.append(to_field(g.coeffs[: max(g.degree, 0) + 1], field))
        else:
            rows.append(to_field(project(g, N, problem.sigma, field, basis).coeffs, field))
    L = max(len(r) for r in rows)
    out = field.zeros((problem.n, L))
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


def _unknowns(heights, N):
    return [(j, i) for i in range(len(heights)) for j in range(N + 1, N + int(heights[i]) + 1)]


def _combine_r(table, i, coeffs):
    """``sum_l coeffs[l] R_i^l`` as an (n, width) array."""
    out = table.field.zeros((table.n, table.residual_width))
    for l, c in enumerate(coeffs):
        if c != 0:
            out += c * table.r_coeffs(i, l)
    return out


def _combine_q(table, i, coeffs, out):
    h = int(table.heights[i])
    for l, c in enumerate(coeffs):
        if l < h or c == 0:
            continue  # Q_i^l = 0 on S_i
        q = table.q_coeffs(i, l)
        out[:, : q.shape[1]] += c * q
    return out


def assemble_tau_system(table, basis, g_coeffs, N):
    """Square system ``M tau = b`` from the residual identity ``R(t) = 0``.

    Returns ``(M, b, unknowns)`` where ``unknowns[k] = (j, i)`` (``i`` 0-based).
    """
    field = table.field
    unknowns = _unknowns(table.heights, N)
    size = int(sum(table.heights))
    M = field.zeros((size, len(unknowns)))
    for k, (j, i) in enumerate(unknowns):
        col = _combine_r(table, i, basis.orthonormal(j))
        if table.residual_leak(col) > 0:
            raise AbelTauError("residual escaped the residual space while assembling M")
        M[:, k] = table.residual_coords(col)
    acc = field.zeros((table.n, table.residual_width))
    for i in range(table.n):
        acc += _combine_r(table, i, g_coeffs[i])
    b = field.zeros(size)
    b[:] = [-v for v in table.residual_coords(acc)]
    return M, b, unknowns


def _rcond_tolerance(field):
    # 1e-12 in double; scaled by the extra digits carried in extended precision
    if field.is_double:
        return PIVOT_TOL
    return PIVOT_TOL * 10.0 ** (16 - field.dps)


def _singular_values(M, field):
    if field.is_double:
        return np.linalg.svd(np.asarray(M, dtype=np.float64), compute_uv=False)
    sv = field.ctx.svd_r(field._matrix(M), compute_uv=False)
    return np.array([float(sv[i]) for i in range(sv.rows)])


def _solve_square(M, b, field):
    k = M.shape[0]
    if k == 0:
        return field.zeros(0)
    # reciprocal condition of the column-equilibrated matrix; unknowns scale independently
    Mn = M.copy()
    for c in range(k):
        norm = field.sqrt(sum(v * v for v in M[:, c]))
        if norm == 0:
            raise IllPosedTauSystemError(f"tau system has a zero column ({c})")
        Mn[:, c] = M[:, c] / norm
    sv = _singular_values(Mn, field)
    rcond = float(sv.min() / sv.max())
    if rcond <= _rcond_tolerance(field):
        raise IllPosedTauSystemError(
            f"tau system is numerically singular (rcond = {rcond:.3e}, precision {field!r})"
        )
    return field.solve(M, b)


@dataclass
class TauSolution:
    N: int
    y_n: FracPolyVec
    taus: dict
    tau_norms: np.ndarray
    residual_norm: float
    precision: object = None
    system_size: int = 0
    forcing_tail: float = 0.0
    seconds: float = 0.0
    extra: dict = dc_field(default_factory=dict)

    def __call__(self, t):
        return self.y_n(t)

    @property
    def n(self):
        return self.y_n.n

    @property
    def tau_vector(self):
        return np.array([self.taus[k] for k in sorted(self.taus, key=lambda k: (k[1], k[0]))])


class TauSolver:
    """Solver that keeps its Lambda set, basis and canonical table across ``N``.

    ``n_max`` fixes the arithmetic for the largest ``N`` expected (used by
    ``precision="auto"``); larger requests rebuild the arithmetic if needed.
    """

    def __init__(self, problem, precision="auto", n_max=None, verify=False):
        self.problem = problem
        self.precision = precision
        self.verify = verify
        # mpmath routines bump their context precision temporarily, so mp solves
        # sharing one context must not interleave; table growth is locked too
        self._lock = threading.RLock()
        self._set_field(choose_precision(problem, n_max or 0, precision))

    def _set_field(self, dps):
        self.dps = dps
        self.field = make_field(dps)
        self.lambda_set = None
        self.table = None
        self.basis = None
        self._forcing = {}

    def _ensure(self, up_to, basis_N):
        p = self.problem
        if self.lambda_set is None:
            self.lambda_set = build_lambda_set(p, 1, self.field)
        ls = self.lambda_set
        need = up_to + int(max(ls.heights)) + 2
        if need > ls.rows:
            # rows only append: existing canonical entries stay valid
            self.lambda_set = ls = build_lambda_set(p, max(need, 2 * ls.rows), self.field)
        if self.table is None:
            self.table = init_canonicals(ls)
        generate(self.table, up_to, ls, verify=self.verify)
        if self.basis is None or self.basis.N < basis_N:
            self.basis = muntz_legendre(max(basis_N, 2 * (self.basis.N if self.basis else 0)), p.sigma, self.field)

    def forcing_coeffs(self, N):
        if N not in self._forcing:
            self._forcing[N] = expand_forcing(self.problem, N, self.field, self.basis if self.basis and self.basis.N >= N else None)
        return self._forcing[N]

    def prepare(self, N):
        """Make the arithmetic, Lambda set, basis and canonical table ready for ``N``."""
        with self._lock:
            return self._prepare(N)

    def _prepare(self, N):
        p = self.problem
        dps = choose_precision(p, N, self.precision)
        if dps is not None and (self.dps is None or dps > self.dps):
            self._set_field(dps)
        if self.lambda_set is None:
            self.lambda_set = build_lambda_set(p, 1, self.field)
        hmax = int(max(self.lambda_set.heights))
        if N < hmax:
            raise ValueError(f"N must be at least max h = {hmax}, got {N}")
        g = self.forcing_coeffs(N)
        self._ensure(max(N + hmax, g.shape[1] - 1), N + hmax)
        return g, hmax

    def solve(self, N):
        t0 = time.perf_counter()
        g, hmax = self.prepare(N)
        if self.field.is_double:
            return self._solve(N, g, hmax, t0)
        with self._lock:
            return self._solve(N, g, hmax, t0)

    def _solve(self, N, g, hmax, t0):
        p = self.problem
        field, table, basis = self.field, self.table, self.basis

        M, b, unknowns = assemble_tau_system(table, basis, g, N)
        tau = _solve_square(M, b, field)

        width = table.q_coeffs(0, table.max_index).shape[1]
        for i in range(p.n):
            for l in range(g.shape[1]):
                if table.has(i, l):
                    width = max(width, table.q_coeffs(i, l).shape[1])
        for j, i in unknowns:
            width = max(width, table.q_coeffs(i, j).shape[1])
        Y = field.zeros((p.n, width))
        for i in range(p.n):
            _combine_q(table, i, g[i], Y)
        H = field.zeros((p.n, N + hmax + 1))
        for k, (j, i) in enumerate(unknowns):
            c = basis.orthonormal(j)
            _combine_q(table, i, tau[k] * c, Y)
            H[i, : len(c)] += tau[k] * c
        y_n = FracPolyVec(p.sigma, Y)

        # residual identity L Y_N = G + H_N, checked in coefficient space
        lhs = apply_L(y_n, self.lambda_set).coeffs
        rhs = _pad_to(g, lhs.shape[1]) + _pad_to(H, lhs.shape[1])
        L = max(lhs.shape[1], rhs.shape[1])
        residual = _abs_max(_pad_to(lhs, L) - _pad_to(rhs, L))
        if residual > RESIDUAL_TOL * (1.0 + y_n.norm()):
            log.warning("tau residual %.3e exceeds tolerance at N=%d", residual, N)

        taus = {(j, i + 1): float(tau[k]) for k, (j, i) in enumerate(unknowns)}
        norms = np.zeros(p.n)
        for (j, i), v in taus.items():
            norms[i - 1] = max(norms[i - 1], abs(v))
        tail = _abs_max(np.asarray(g[:, N + 1:])) if g.shape[1] > N + 1 else 0.0
        return TauSolution(
            N=N,
            y_n=y_n,
            taus=taus,
            tau_norms=norms,
            residual_norm=float(residual),
            precision=self.dps,
            system_size=len(unknowns),
            forcing_tail=tail,
            seconds=time.perf_counter() - t0,
        )


def solve(problem, N, precision="auto", verify=False):
    """One-shot Tau solve of ``problem`` at degree ``N``."""
    return TauSolver(problem, precision, n_max=N, verify=verify).solve(N)


def _exact_values(exact, t):
    if callable(exact):
        return np.asarray(exact(t), dtype=np.float64)
    return np.array([np.broadcast_to(np.asarray(e(t), dtype=np.float64), t.shape) for e in exact])


def sup_error(y_n, exact, grid=GRID):
    """Per-component max of ``|Y_N,i(t) - y_i(t)|`` on ``grid`` uniform points of [0, 1]."""
    if isinstance(y_n, TauSolution):
        y_n = y_n.y_n
    t = np.linspace(0.0, 1.0, grid)
    return np.max(np.abs(y_n(t) - _exact_values(exact, t)), axis=1)


def tau_decay_report(solutions, exact=None, grid=GRID):
    """Rows ``(N, ||tau_1||, ..., ||tau_n||[, ||e_1||, ..., ||e_n||])`` sorted by ``N``."""
    rows = []
    for s in sorted(solutions, key=lambda s: s.N):
        row = [s.N, *map(float, s.tau_norms)]
        if exact is not None:
            row.extend(map(float, sup_error(s.y_n, exact, grid)))
        rows.append(tuple(row))
    return rows
