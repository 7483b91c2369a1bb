"""Shifted Jacobi and Muntz-Legendre polynomials on [0, 1].

The Muntz-Legendre family is ``L_i(t) = J_i^{0, 1/sigma - 1}(t**sigma)``.
Coefficient arrays of ``L_i`` in the lattice ``t**(l*sigma)`` are exactly the
monomial coefficients of the shifted Jacobi polynomial in ``s = t**sigma``.
Those coefficients grow like ``(3 + 2*sqrt(2))**i``, so values used for
quadrature are always produced by the three-term recurrence in value space,
never by summing monomials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.special import roots_jacobi

from ._field import DOUBLE, to_field
from .errors import CapacityError, QuadratureError
from .fracpoly import FracPoly, as_sigma

__all__ = [
    "JacobiParams",
    "MuntzBasis",
    "jacobi_coeffs",
    "jacobi_norm",
    "jacobi_values",
    "muntz_legendre",
    "muntz_norm",
    "muntz_values",
    "orthonormal_coeffs",
    "quadrature_rule",
    "project",
]

DEGREE_CAP = 200


@dataclass(frozen=True)
class JacobiParams:
    """Shifted Jacobi weight ``s**xi * (1 - s)**theta`` on [0, 1]."""

    theta: float
    xi: float

    def __post_init__(self):
        if not (self.theta > -1 and self.xi > -1):
            raise ValueError(f"Jacobi parameters must exceed -1, got theta={self.theta}, xi={self.xi}")


def _check_cap(n, cap):
    if n < 0:
        raise ValueError("degree must be non-negative")
    if n > cap:
        raise CapacityError(f"degree {n} exceeds the configured cap {cap}")


def jacobi_coeffs(n, params, field=DOUBLE, cap=DEGREE_CAP):
    """Monomial coefficients ``Z_j``, ``j = 0..n``, of ``J_n^{theta, xi}(s)``.

    Gamma ratios go through log-Gamma with sign tracking in double precision.
    """
    _check_cap(n, cap)
    if n == 0:
        return field.asarray([1.0])
    th, xi = params.theta, params.xi
    out = field.zeros(n + 1)
    for j in range(n + 1):
        mag = field.gamma_ratio_terms(
            [n + xi + 1, n + th + xi + j + 1],
            [xi + j + 1, j + 1, n + th + xi + 1, n - j + 1],
        )
        out[j] = mag if (n - j) % 2 == 0 else -mag
    return out


def jacobi_norm(n, params, field=DOUBLE):
    """Squared weighted norm ``h_n^{theta, xi}``."""
    th, xi = params.theta, params.xi
    if n == 0:
        return field.beta(th + 1, xi + 1)
    ratio = field.gamma_ratio_terms([n + th + 1, n + xi + 1], [n + 1, n + th + xi + 1])
    return ratio / field.scalar(2 * n + th + xi + 1)


def jacobi_values(n_max, params, s):
    """Values ``J_k(s)`` for ``k = 0..n_max`` via the three-term recurrence.

    Returns an array of shape ``(n_max + 1, len(s))``.
    """
    a, b = params.theta, params.xi
    x = 2.0 * np.asarray(s, dtype=np.float64) - 1.0
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(1, n_max):
        c = 2 * k + a + b
        d1 = 2 * (k + 1) * (k + a + b + 1) * c
        d2 = (c + 1) * ((c + 2) * c * x + a * a - b * b)
        d3 = 2 * (k + a) * (k + b) * (c + 2)
        out[k + 1] = (d2 * out[k] - d3 * out[k - 1]) / d1
    return out


def _muntz_params(sigma):
    return JacobiParams(0.0, float(1 / as_sigma(sigma)) - 1.0)


def muntz_norm(i, sigma, field=DOUBLE):
    """``||L_{i,sigma}||^2 = h_i^{0, 1/sigma - 1} / sigma`` (unweighted L2 on [0, 1])."""
    if i < 0:
        raise ValueError("index must be non-negative")
    sigma = as_sigma(sigma)
    return jacobi_norm(i, _muntz_params(sigma), field) * field.scalar(sigma.denominator)


def muntz_values(n_max, sigma, t):
    """Stable values ``L_{k,sigma}(t)``, shape ``(n_max + 1, len(t))``."""
    sigma = as_sigma(sigma)
    s = np.asarray(t, dtype=np.float64) ** float(sigma)
    return jacobi_values(n_max, _muntz_params(sigma), s)


@dataclass(frozen=True)
class MuntzBasis:
    """Muntz-Legendre polynomials ``L_0..L_N`` as lattice coefficient arrays."""

    sigma: object
    N: int
    polys: tuple
    norms: tuple
    field: object = dc_field(default=DOUBLE, compare=False)

    def orthonormal(self, j):
        return orthonormal_coeffs(j, self)

    def values(self, t):
        return muntz_values(self.N, self.sigma, t)

    def extended(self, N):
        """Basis with at least ``N + 1`` members (self if already large enough)."""
        return self if N <= self.N else muntz_legendre(N, self.sigma, self.field)


def muntz_legendre(N, sigma, field=DOUBLE, cap=DEGREE_CAP):
    """Build ``L_0..L_N`` by the Muntz-Legendre three-term recurrence.

    The recurrence variable is ``x = 2*t**sigma - 1``; multiplying by ``x`` in
    coefficient space is ``2*shift(L, 1) - L``.
    """
    _check_cap(N, cap)
    sigma = as_sigma(sigma)
    g = sigma.denominator  # 1/sigma
    one = field.scalar(1)
    polys = [field.asarray([1.0])]
    if N >= 1:
        # (t^sigma (1 + sigma) - 1) / sigma
        polys.append(field.asarray([-g, g + 1]) * one)
    for i in range(1, N):
        c = 2 * i + g
        d1 = field.scalar(2 * (i + 1) * (i + g) * (2 * i + g - 1))
        lead = field.scalar(c * (c - 1) * (c + 1))
        const = field.scalar(c * (g - 1) ** 2)
        d3 = field.scalar(2 * i * (i + g - 1) * (c + 1))
        cur, prev = polys[i], polys[i - 1]
        nxt = field.zeros(i + 2)
        nxt[1:] += 2 * lead * cur
        nxt[: i + 1] -= (lead + const) * cur
        nxt[:i] -= d3 * prev
        polys.append(nxt / d1)
    norms = tuple(muntz_norm(i, sigma, field) for i in range(N + 1))
    return MuntzBasis(sigma, N, tuple(FracPoly(sigma, p) for p in polys), norms, field)


def orthonormal_coeffs(j, basis):
    """Coefficients ``c_{j,l}`` of the orthonormal polynomial ``p_j = L_j / ||L_j||``."""
    if j > basis.N:
        raise CapacityError(f"orthonormal index {j} exceeds basis size {basis.N}")
    return basis.polys[j].coeffs / basis.field.sqrt(basis.norms[j])


def quadrature_rule(npts, sigma):
    """Nodes ``t_k`` and weights ``w_k`` with ``sum w_k f(t_k) ~ int_0^1 f(t) dt``.

    Gauss-Jacobi in ``s = t**sigma`` with weight ``s**(1/sigma - 1)``; exact
    whenever ``f(s**(1/sigma))`` is a polynomial of degree ``< 2*npts`` in ``s``.
    """
    sigma = as_sigma(sigma)
    g = sigma.denominator
    x, w = roots_jacobi(npts, 0.0, g - 1.0)
    s = (1.0 + x) / 2.0
    return s ** g, w * g / 2.0 ** g


def _sample(f, t):
    try:
        vals = np.asarray(f(t), dtype=np.float64)
        if vals.shape == t.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(f(v)) for v in t])


def _muntz_moments(f, N, sigma, npts):
    t, w = quadrature_rule(npts, sigma)
    vals = _sample(f, t)
    L = muntz_values(N, sigma, t)
    return L @ (w * vals)


def project(f, N, sigma, field=DOUBLE, basis=None, npts=None, rtol=1e-13, max_npts=4096):
    """L2 projection of ``f`` onto ``span{L_0, ..., L_N}``, returned as a FracPoly.

    ``f`` may be a FracPoly (returned unchanged when its index is at most N)
    or a vectorised callable on [0, 1]. Quadrature is refined by doubling
    until two successive moment vectors agree to ``rtol``.
    """
    sigma = as_sigma(sigma)
    if basis is None or basis.N < N or basis.sigma != sigma:
        basis = muntz_legendre(N, sigma, field)
    field = basis.field
    if isinstance(f, FracPoly):
        if f.sigma != sigma:
            raise ValueError(f"sigma mismatch: {f.sigma} vs {sigma}")
        if f.degree <= N:
            return FracPoly(sigma, to_field(f.coeffs[: max(f.degree, 0) + 1], field))
        # polynomial integrand in s of degree deg(f) + N: exact rule, no refinement
        n = (f.degree + N) // 2 + 1
        moments = _muntz_moments(f, N, sigma, n)
    else:
        n = npts or max(N + 16, 32)
        moments = _muntz_moments(f, N, sigma, n)
        while True:
            n2 = 2 * n
            if n2 > max_npts:
                raise QuadratureError(
                    f"projection moments did not converge with {n} nodes "
                    f"(N={N}, sigma={sigma})"
                )
            finer = _muntz_moments(f, N, sigma, n2)
            diff = np.max(np.abs(finer - moments))
            scale = 1.0 + np.max(np.abs(finer))
            moments, n = finer, n2
            if not math.isfinite(diff):
                raise QuadratureError("non-finite projection moments; is f finite on [0, 1]?")
            if diff <= rtol * scale:
                break
    coeffs = field.zeros(N + 1)
    for i in range(N + 1):
        u_i = field.scalar(moments[i]) / basis.norms[i]
        coeffs[: i + 1] += u_i * basis.polys[i].coeffs
    return FracPoly(sigma, coeffs)
