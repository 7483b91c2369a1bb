"""Fractional power-series solution, an engine independent of the Tau machinery.

Writing ``y_i = sum_mu ybar[i, mu] t**(mu/gamma)`` and expanding forcing and
kernels on the same lattice, matching powers gives

    ybar[i, mu] = gbar[i, mu] + sum_j sum_{mu1, mu2} khat_ij[mu1, mu2]
                  * ybar[j, mu - mu1 - mu2 - delta_ij]
                  * B(alpha_ij, (mu - mu1)/gamma - alpha_ij + 1)

which only looks backwards in ``mu`` since every ``delta_ij >= 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import beta

from .errors import DomainError, UnsupportedInputError
from .fracpoly import FracPoly
from .operator import Forcing

__all__ = ["SeriesSolution", "forcing_series", "series_coeffs", "radius_estimate", "eval_series"]

RADIUS_GRID = 201


@dataclass(frozen=True)
class SeriesSolution:
    sigma: Fraction
    M: int
    coeffs: np.ndarray  # (n, M + 1)
    radius: np.ndarray

    @property
    def window(self):
        """Safe comparison window ``[0, min eps_i / 2]``."""
        return float(np.min(self.radius)) / 2.0

    def __call__(self, t):
        return eval_series(self, t)


def forcing_series(problem, M):
    """``gbar[i, mu]`` for ``mu = 0..M``."""
    out = np.zeros((problem.n, M + 1))
    for i, g in enumerate(problem.forcing):
        if isinstance(g, FracPoly):
            c = np.asarray(g.coeffs, dtype=np.float64)[: M + 1]
            out[i, : len(c)] = c
        elif isinstance(g, Forcing) and g.series is not None:
            out[i] = np.asarray(g.series(M, problem.sigma), dtype=np.float64)[: M + 1]
        else:
            raise UnsupportedInputError(
                f"forcing component {i + 1} has no fractional power expansion; "
                "the series oracle needs one"
            )
    return out


def series_coeffs(problem, M, radius=True):
    """Series coefficients up to index ``M`` (and the radius estimate)."""
    if M < 0:
        raise ValueError("M must be non-negative")
    n = problem.n
    gamma_ = problem.gamma
    deltas = problem.deltas
    gbar = forcing_series(problem, M)
    y = np.zeros((n, M + 1))
    # beta factors depend only on (i, j, mu - mu1)
    bcache = {}

    def bfac(i, j, m):
        key = (i, j, m)
        if key not in bcache:
            a = float(problem.alphas[i][j])
            bcache[key] = beta(a, m / gamma_ - a + 1.0)
        return bcache[key]

    terms = []
    for i in range(n):
        row = []
        for j in range(n):
            k = np.asarray(problem.kernels[i][j].coeffs, dtype=np.float64)
            row.append([(p, q, k[p, q]) for p, q in zip(*np.nonzero(k))])
        terms.append(row)

    for mu in range(M + 1):
        for i in range(n):
            acc = gbar[i, mu]
            for j in range(n):
                d = deltas[i][j]
                for p, q, k in terms[i][j]:
                    nu = mu - p - q - d
                    if nu < 0:
                        continue
                    acc += k * y[j, nu] * bfac(i, j, mu - p)
            y[i, mu] = acc
    rad = radius_estimate(problem, M) if radius else np.ones(n)
    return SeriesSolution(problem.sigma, M, y, rad)


def radius_estimate(problem, M=60, grid=RADIUS_GRID):
    """``eps_i = min(1, (D1_i / D2_i)**(1/alpha))`` from majorant maxima on a grid.

    ``D1_i`` is the max over [0, 1] of ``sum |gbar[i, mu]| t**(mu sigma)`` and
    ``D2_i = (2/alpha) sum_j D1_j max |k_ij|``, with ``alpha`` the smallest
    exponent among nonzero kernels.
    """
    n = problem.n
    gbar = np.abs(forcing_series(problem, M))
    t = np.linspace(0.0, 1.0, grid)
    powers = t[None, :] ** (np.arange(M + 1)[:, None] * float(problem.sigma))
    D1 = np.max(gbar @ powers, axis=1)
    if not np.any(D1 > 0):
        return np.ones(n)
    alpha = float(problem.min_alpha)
    kmax = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            kb = problem.kernels[i][j]
            if kb.is_zero:
                continue
            c = np.abs(np.asarray(kb.coeffs, dtype=np.float64))
            P, Q = c.shape
            tp = t[None, :] ** (np.arange(P)[:, None] * float(problem.sigma))
            sp = t[None, :] ** (np.arange(Q)[:, None] * float(problem.sigma))
            kmax[i, j] = np.max(tp.T @ c @ sp)
    D2 = (2.0 / alpha) * (kmax @ D1)
    eps = np.ones(n)
    for i in range(n):
        if D2[i] > 0 and D1[i] > 0:
            eps[i] = min(1.0, (D1[i] / D2[i]) ** (1.0 / alpha))
    return eps


def eval_series(sol, t):
    """Truncated series values, shape ``(n,) + shape(t)``."""
    t = np.asarray(t, dtype=np.float64)
    if np.any((t < 0) | (t > 1)):
        raise DomainError("series evaluation requires t in [0, 1]")
    flat = np.atleast_1d(t).ravel()
    X = flat[None, :] ** (np.arange(sol.M + 1)[:, None] * float(sol.sigma))
    return (sol.coeffs @ X).reshape((sol.coeffs.shape[0],) + t.shape)
