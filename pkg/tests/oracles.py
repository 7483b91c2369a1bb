"""Independent reference computations used only by the tests.

Nothing here goes through the package's own Lambda, canonical or Tau code.
"""
import math
from fractions import Fraction

import mpmath
import numpy as np
import sympy


def abel_integral(f, t, a, dps=30):
    """int_0^t (t - s)**(a - 1) f(s) ds by tanh-sinh after w = (t - s)**a."""
    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        a = mpmath.mpf(a)
        val = mpmath.quad(lambda w: f(max(t - w ** (1 / a), 0)), [0, t**a]) / a
        return float(val)


def shifted_jacobi_exact(n, xi):
    """Exact rational monomial coefficients of P_n^{(0, xi)}(2s - 1)."""
    s = sympy.Symbol("s")
    poly = sympy.Poly(sympy.expand(sympy.jacobi(n, 0, sympy.Integer(xi), 2 * s - 1)), s)
    coeffs = [Fraction(0)] * (n + 1)
    for (k,), c in poly.terms():
        coeffs[k] = Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
    return coeffs


def exact_inner(a, b, gamma):
    """int_0^1 A(t) B(t) dt for coefficient lists on the lattice t**(l/gamma), in rationals."""
    total = Fraction(0)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            total += x * y * Fraction(gamma, i + j + gamma)
    return total


def projection_moments(f, N, gamma, dps=30):
    """int_0^1 f(t) L_i(t) dt for i <= N via mpmath quadrature in s = t**(1/gamma)."""
    out = []
    with mpmath.workdps(dps):
        for i in range(N + 1):
            g = lambda s, i=i: f(s**gamma) * mpmath.jacobi(i, 0, gamma - 1, 2 * s - 1) * gamma * s ** (gamma - 1)
            out.append(float(mpmath.quad(g, [0, 0.5, 1])))
    return np.array(out)


def jacobi_explicit(n, xi):
    """P_n^{(0, xi)}(2s - 1) = sum_k C(n, k) C(n + xi, k) (s - 1)^k s^(n - k), in rationals."""
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        c = math.comb(n, n - k) * math.comb(n + xi, k)
        # (s - 1)^k s^(n - k) = sum_m C(k, m) (-1)^(k - m) s^(m + n - k)
        for m in range(k + 1):
            coeffs[m + n - k] += c * math.comb(k, m) * (-1) ** (k - m)
    return coeffs
