"""Problem data and the coefficient-space integral operator.

For the system ``y_i = g_i + sum_j int_0^t (t-s)**(alpha_ij - 1) k_ij(t,s) y_j(s) ds``
with ``alpha_ij = delta_ij * sigma`` and ``k_ij = sum khat[p,q] t**(p sigma) s**(q sigma)``,

    int_0^t (t-s)**(delta sigma - 1) k(t,s) s**(r sigma) ds = e_{r+1}^T Lambda X_t

where row ``r+1`` of ``Lambda`` holds ``ktilde(v, l=r)`` at column ``delta + r + v + 1``
(1-based). ``Ltilde = I - Lambda`` on the diagonal blocks and ``-Lambda`` elsewhere,
so that ``L(t**(r sigma) e_l)`` has component ``v`` equal to row ``r+1`` of ``Ltilde[v, l]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ._field import DOUBLE
from .basis import muntz_legendre, muntz_values, quadrature_rule
from .errors import CapacityError
from .fracpoly import FracBivar, FracPoly, FracPolyVec, as_sigma

__all__ = [
    "Forcing",
    "Problem",
    "LambdaSet",
    "ktilde",
    "lambda_matrix",
    "build_lambda_set",
    "heights",
    "apply_L",
    "project_kernel",
]

NONZERO_TOL = 1e-14


@dataclass(frozen=True)
class Forcing:
    """A forcing component known as a function rather than a finite FracPoly.

    ``func`` is vectorised on [0, 1]. ``series(M, sigma)``, when given, returns
    the coefficients of ``t**(mu*sigma)`` for ``mu = 0..M``; the series oracle
    needs it.
    """

    func: Callable
    series: Optional[Callable] = None
    label: str = ""

    def __call__(self, t):
        return self.func(t)


def _as_fraction(a):
    if isinstance(a, Fraction):
        return a
    if isinstance(a, str):
        return Fraction(a.strip())
    if isinstance(a, float):
        return Fraction(a).limit_denominator(1000)
    return Fraction(a)


@dataclass(frozen=True)
class Problem:
    """System of Abel-Volterra equations on [0, 1] with rational exponents."""

    alphas: tuple
    kernels: tuple
    forcing: tuple
    exact: Optional[tuple] = None
    name: str = ""

    def __post_init__(self):
        n = len(self.alphas)
        if n == 0:
            raise ValueError("problem dimension must be at least 1")
        if any(len(row) != n for row in self.alphas) or len(self.kernels) != n or any(
            len(row) != n for row in self.kernels
        ):
            raise ValueError("alphas and kernels must be n x n")
        if len(self.forcing) != n:
            raise ValueError("need one forcing component per equation")
        for i, row in enumerate(self.alphas):
            for j, a in enumerate(row):
                if not isinstance(a, Fraction):
                    raise TypeError("alphas must be Fractions; use Problem.build")
                if not (0 < a <= 1):
                    raise ValueError(
                        f"alpha[{i + 1},{j + 1}] = {a} violates 0 < alpha <= 1 "
                        "(alpha = a/b in lowest terms, gcd(a, b) = 1)"
                    )
        sigma = self.sigma
        for i, row in enumerate(self.kernels):
            for j, k in enumerate(row):
                if k.sigma != sigma:
                    raise ValueError(f"kernel[{i + 1},{j + 1}] has sigma {k.sigma}, expected {sigma}")
        for i, g in enumerate(self.forcing):
            if isinstance(g, FracPoly) and g.sigma != sigma:
                raise ValueError(f"forcing[{i + 1}] has sigma {g.sigma}, expected {sigma}")
        if self.exact is not None and len(self.exact) != n:
            raise ValueError("need one exact-solution component per equation")

    @classmethod
    def build(cls, alphas, kernels, forcing, exact=None, name=""):
        """Convenience constructor.

        ``alphas`` entries may be Fractions, ints or ``"a/b"`` strings. Each
        kernel may be a FracBivar, a scalar (constant kernel), a 2-D coefficient
        grid, or a list of ``(p, q, coefficient)`` triples. Each forcing entry
        may be a FracPoly, a ``{l: coefficient}`` dict, a Forcing, or a callable.
        """
        alphas = tuple(tuple(_as_fraction(a) for a in row) for row in alphas)
        gamma = math.lcm(*(a.denominator for row in alphas for a in row))
        sigma = Fraction(1, gamma)

        def kern(k):
            if isinstance(k, FracBivar):
                return k if k.sigma == sigma else FracBivar(sigma, k.coeffs)
            if np.isscalar(k):
                return FracBivar.constant(sigma, float(k))
            if isinstance(k, (list, tuple)) and k and isinstance(k[0], tuple) and len(k[0]) == 3:
                return FracBivar.from_triples(sigma, k)
            return FracBivar(sigma, k)

        def forc(g):
            if isinstance(g, FracPoly):
                return g if g.sigma == sigma else FracPoly(sigma, g.coeffs)
            if isinstance(g, dict):
                return FracPoly.from_map(sigma, g)
            if isinstance(g, Forcing):
                return g
            if callable(g):
                return Forcing(g)
            if np.isscalar(g):
                return FracPoly(sigma, [float(g)])
            return FracPoly(sigma, g)

        kernels = tuple(tuple(kern(k) for k in row) for row in kernels)
        forcing = tuple(forc(g) for g in forcing)
        exact = tuple(exact) if exact is not None else None
        return cls(alphas, kernels, forcing, exact, name)

    @property
    def n(self):
        return len(self.alphas)

    @property
    def gamma(self):
        return math.lcm(*(a.denominator for row in self.alphas for a in row))

    @property
    def sigma(self):
        return Fraction(1, self.gamma)

    @property
    def deltas(self):
        g = self.gamma
        return tuple(tuple(int(a * g) for a in row) for row in self.alphas)

    @property
    def kernel_degree(self):
        """Largest total index ``p + q`` appearing in any kernel."""
        return max(0, max(k.max_total_degree for row in self.kernels for k in row))

    @property
    def min_alpha(self):
        active = [a for row_a, row_k in zip(self.alphas, self.kernels) for a, k in zip(row_a, row_k) if not k.is_zero]
        return min(active) if active else Fraction(1)


def ktilde(kernel, delta, sigma, v, l, field=DOUBLE):
    """``sum_{p+q=v} khat[p,q] * Beta(delta*sigma, (q+l)*sigma + 1)``."""
    if v < 0 or l < 0:
        raise ValueError("v and l must be non-negative")
    sigma = as_sigma(sigma)
    P, Q = kernel.coeffs.shape
    total = field.scalar(0)
    for q in range(max(0, v - P + 1), min(v, Q - 1) + 1):
        k = kernel.coeffs[v - q, q]
        if k != 0:
            total += field.scalar(k) * field.beta(delta * sigma, (q + l) * sigma + 1)
    return total


def lambda_matrix(kernel, delta, sigma, rows, cols, field=DOUBLE):
    """Truncated ``Lambda``; entry (r, c) (1-based) is ``ktilde(c - delta - r, r - 1)``."""
    out = field.zeros((rows, cols))
    if kernel.is_zero:
        return out
    vmax = kernel.coeffs.shape[0] + kernel.coeffs.shape[1] - 2
    for r in range(rows):
        for v in range(vmax + 1):
            c = delta + r + v  # 0-based column
            if c >= cols:
                break
            out[r, c] = ktilde(kernel, delta, sigma, v, r, field)
    return out


def heights(lambdas):
    """Pair heights, height vector and offsets from the band structure.

    ``h_ij`` is the largest diagonal offset ``c - r`` carrying a nonzero entry of
    ``Lambda_ij`` (0 when the block vanishes); ``h_i = max_j h_ij``;
    ``Delta_j = min_i (h_i - h_ij)``.
    """
    n = len(lambdas)
    pair = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(n):
            lam = np.asarray(lambdas[i][j])
            mask = np.array([[abs(x) > NONZERO_TOL for x in row] for row in lam], dtype=bool)
            r, c = np.nonzero(mask)
            pair[i, j] = int(np.max(c - r)) if r.size else 0
    h = pair.max(axis=1)
    offsets = np.array([min(h[i] - pair[i, j] for i in range(n)) for j in range(n)], dtype=int)
    return pair, h, offsets


@dataclass(frozen=True)
class LambdaSet:
    """Truncated operator blocks plus the height data derived from them."""

    sigma: Fraction
    deltas: tuple
    lambdas: tuple
    lambda_tildes: tuple
    pair_heights: np.ndarray
    heights: np.ndarray
    offsets: np.ndarray
    rows: int
    cols: int
    field: object = dc_field(default=DOUBLE, compare=False)

    @property
    def n(self):
        return len(self.lambdas)

    def tilde(self, i, j, r, c):
        """1-based entry ``Ltilde_{i,j}(r, c)`` (``i, j`` 1-based too)."""
        if r > self.rows or c > self.cols:
            raise CapacityError(f"Lambda entry ({r}, {c}) outside truncation {self.rows}x{self.cols}")
        return self.lambda_tildes[i - 1][j - 1][r - 1, c - 1]


def build_lambda_set(problem, rows, field=DOUBLE):
    """Build ``Lambda``/``Ltilde`` with ``rows`` rows and enough columns for every band."""
    rows = max(int(rows), 1)
    n = problem.n
    sigma = problem.sigma
    deltas = problem.deltas
    cols = rows + max(max(r) for r in deltas) + problem.kernel_degree + 1
    lambdas = []
    tildes = []
    eye = field.zeros((rows, cols))
    for r in range(rows):
        eye[r, r] = field.scalar(1)
    for i in range(n):
        lrow, trow = [], []
        for j in range(n):
            lam = lambda_matrix(problem.kernels[i][j], deltas[i][j], sigma, rows, cols, field)
            lam.setflags(write=False)
            tl = (eye - lam) if i == j else -lam
            tl.setflags(write=False)
            lrow.append(lam)
            trow.append(tl)
        lambdas.append(tuple(lrow))
        tildes.append(tuple(trow))
    pair, h, offsets = heights(lambdas)
    return LambdaSet(sigma, deltas, tuple(lambdas), tuple(tildes), pair, h, offsets, rows, cols, field)


def apply_L(y, lambda_set):
    """``L y = y - int K y`` computed in coefficient space through ``Ltilde``."""
    if isinstance(y, FracPoly):
        raise TypeError("apply_L expects a FracPolyVec")
    ls = lambda_set
    if y.n != ls.n:
        raise ValueError(f"dimension mismatch: {y.n} vs {ls.n}")
    if y.sigma != ls.sigma:
        raise ValueError(f"sigma mismatch: {y.sigma} vs {ls.sigma}")
    D = y.coeffs.shape[1]
    if D > ls.rows:
        # trailing zero padding is harmless; real content beyond the truncation is not
        tail = y.coeffs[:, ls.rows:]
        if any(v != 0 for v in tail.ravel()):
            raise CapacityError(
                f"polynomial index {y.degree} exceeds the Lambda truncation ({ls.rows} rows)"
            )
        D = ls.rows
    coeffs = y.coeffs[:, :D]
    out = ls.field.zeros((ls.n, ls.cols))
    for v in range(ls.n):
        for l in range(ls.n):
            out[v] += coeffs[l] @ ls.lambda_tildes[v][l][:D]
    return FracPolyVec(ls.sigma, out)


def project_kernel(func, sigma, N, npts=None):
    """Tensorised Muntz projection of a smooth kernel ``k(t, s)`` onto degree ``N`` per variable.

    Convenience path for kernels not given as coefficients; returns a FracBivar.
    """
    sigma = as_sigma(sigma)
    basis = muntz_legendre(N, sigma)
    npts = npts or N + 16
    t, w = quadrature_rule(npts, sigma)
    L = muntz_values(N, sigma, t)
    F = np.asarray(func(t[:, None], t[None, :]), dtype=np.float64)
    moments = (L * w) @ F @ (L * w).T
    norms = np.asarray(basis.norms, dtype=np.float64)
    u = moments / np.outer(norms, norms)
    C = np.array([np.pad(np.asarray(p.coeffs, dtype=np.float64), (0, N - i)) for i, p in enumerate(basis.polys)])
    return FracBivar(sigma, C.T @ u @ C)
