"""Scalar fields for coefficient arithmetic.

Coefficient arrays are numpy arrays. In the double field they have dtype
float64; in the extended field they are object arrays of mpmath numbers
bound to a private mpmath context, so no global precision state is touched.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np
from scipy import special


class Field:
    """Double-precision field backed by numpy/scipy."""

    dps = None
    dtype = np.float64

    def __repr__(self):
        return "Field(double)"

    def __eq__(self, other):
        return isinstance(other, Field) and self.dps == other.dps

    def __hash__(self):
        return hash(("field", self.dps))

    @property
    def is_double(self):
        return self.dps is None

    def scalar(self, x):
        if isinstance(x, Fraction):
            return x.numerator / x.denominator
        return float(x)

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.float64)

    def asarray(self, values):
        return np.array(values, dtype=np.float64)

    def to_float(self, arr):
        return np.asarray(arr, dtype=np.float64)

    def beta(self, a, b):
        return float(special.beta(self.scalar(a), self.scalar(b)))

    def sqrt(self, x):
        return math.sqrt(x)

    def gamma_ratio_terms(self, logs_num, logs_den):
        """exp(sum lgamma(num) - sum lgamma(den)), with sign tracking."""
        val = 0.0
        sign = 1.0
        for a in logs_num:
            val += special.gammaln(a)
            sign *= special.gammasgn(a)
        for a in logs_den:
            val -= special.gammaln(a)
            sign *= special.gammasgn(a)
        return sign * math.exp(val)

    def inv(self, mat):
        return np.linalg.inv(np.asarray(mat, dtype=np.float64))

    def det(self, mat):
        return float(np.linalg.det(np.asarray(mat, dtype=np.float64)))

    def solve(self, mat, rhs):
        return np.linalg.solve(np.asarray(mat, dtype=np.float64), np.asarray(rhs, dtype=np.float64))

    def powers(self, t, sigma, count):
        """Matrix X[l, k] = t_k ** (l * sigma) for l < count (0**0 == 1)."""
        t = np.asarray(t, dtype=np.float64)
        u = t ** self.scalar(sigma)
        out = np.empty((count, t.size))
        if count:
            out[0] = 1.0
        for l in range(1, count):
            out[l] = out[l - 1] * u
        return out


class MPField(Field):
    """Extended-precision field on a private mpmath context."""

    dtype = object

    def __init__(self, dps):
        self.dps = int(dps)
        self.ctx = mpmath.MPContext()
        self.ctx.dps = self.dps

    def __repr__(self):
        return f"MPField(dps={self.dps})"

    def scalar(self, x):
        if isinstance(x, Fraction):
            return self.ctx.mpf(x.numerator) / x.denominator
        if isinstance(x, (np.floating, np.integer)):
            x = x.item()
        return self.ctx.mpf(x)

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.fill(self.ctx.zero)
        return out

    def asarray(self, values):
        arr = np.asarray(values)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = self.scalar(v)
        return out

    def to_float(self, arr):
        arr = np.asarray(arr)
        return np.array([float(v) for v in arr.ravel()], dtype=np.float64).reshape(arr.shape)

    def beta(self, a, b):
        return self.ctx.beta(self.scalar(a), self.scalar(b))

    def sqrt(self, x):
        return self.ctx.sqrt(x)

    def gamma_ratio_terms(self, logs_num, logs_den):
        val = self.ctx.one
        for a in logs_num:
            val *= self.ctx.gamma(self.scalar(a))
        for a in logs_den:
            val /= self.ctx.gamma(self.scalar(a))
        return val

    def _matrix(self, mat):
        mat = np.asarray(mat, dtype=object)
        return self.ctx.matrix([[self.scalar(v) for v in row] for row in mat])

    def inv(self, mat):
        m = self._matrix(mat) ** -1
        return np.array(m.tolist(), dtype=object)

    def det(self, mat):
        return self.ctx.det(self._matrix(mat))

    def solve(self, mat, rhs):
        x = self.ctx.lu_solve(self._matrix(mat), self.ctx.matrix([self.scalar(v) for v in rhs]))
        return np.array([x[i] for i in range(x.rows)], dtype=object)

    def powers(self, t, sigma, count):
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        s = self.scalar(sigma)
        u = np.array([self.ctx.mpf(float(v)) ** s if v > 0 else self.ctx.zero for v in t], dtype=object)
        out = np.empty((count, t.size), dtype=object)
        if count:
            out[0] = self.ctx.one
        for l in range(1, count):
            out[l] = out[l - 1] * u
        return out


DOUBLE = Field()


def make_field(dps=None):
    """Return the double field for ``dps=None``, else an mpmath field."""
    if dps is None:
        return DOUBLE
    return MPField(dps)


def field_of(arr):
    """Best-effort field detection from an array's dtype."""
    arr = np.asarray(arr)
    if arr.dtype != object:
        return DOUBLE
    for v in arr.ravel():
        ctx = getattr(v, "context", None)
        if ctx is not None:
            f = MPField.__new__(MPField)
            f.ctx = ctx
            f.dps = ctx.dps
            return f
    return MPField(30)


def to_field(arr, field):
    """Convert a coefficient array into ``field``."""
    if field.is_double:
        return field.to_float(arr) if np.asarray(arr).dtype == object else np.asarray(arr, dtype=np.float64)
    return field.asarray(arr)
