"""Polynomials in fractional powers ``t**(l*sigma)``.

Everything in the solver is stored as dense coefficient arrays indexed by the
integer ``l`` of the exponent ``l*sigma``. Coefficients are either float64 or
mpmath numbers (object arrays); arithmetic never mixes the two silently.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ._field import DOUBLE, field_of
from .errors import DomainError, IncompatibleExponentError

__all__ = [
    "FracPoly",
    "FracPolyVec",
    "FracBivar",
    "as_sigma",
    "eval",
    "axpy",
    "shift",
]

DEFAULT_TOL = 1e-12


def as_sigma(sigma):
    """Validate and normalise an exponent step ``sigma = 1/gamma``."""
    if isinstance(sigma, str):
        sigma = Fraction(sigma)
    elif isinstance(sigma, float):
        sigma = Fraction(sigma).limit_denominator(10_000)
    else:
        sigma = Fraction(sigma)
    if not (0 < sigma <= 1) or sigma.numerator != 1:
        raise ValueError(f"sigma must be 1/gamma for an integer gamma >= 1, got {sigma}")
    return sigma


def _frozen(arr):
    arr = np.array(arr, dtype=arr.dtype if isinstance(arr, np.ndarray) else None, copy=True)
    if arr.dtype.kind in "iub":
        arr = arr.astype(np.float64)
    arr.setflags(write=False)
    return arr


def _pad_to(arr, length, axis=-1):
    cur = arr.shape[axis]
    if cur >= length:
        return arr
    width = [(0, 0)] * arr.ndim
    width[axis] = (0, length - cur)
    if arr.dtype == object:
        zero = field_of(arr).zeros(()).item()
        return np.pad(arr, width, mode="constant", constant_values=zero)
    return np.pad(arr, width)


def padded_sum(a, b, alpha=1):
    """``alpha*a + b`` for arrays whose last axes may differ in length."""
    n = max(a.shape[-1], b.shape[-1])
    return alpha * _pad_to(a, n) + _pad_to(b, n)


def _check_t(t):
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 0):
        raise DomainError("fractional powers are only evaluated for t >= 0")
    return arr


def _abs_max(arr):
    if arr.size == 0:
        return 0.0
    return float(max(abs(v) for v in arr.ravel())) if arr.dtype == object else float(np.max(np.abs(arr)))


class FracPoly:
    """Univariate polynomial ``sum_l coeffs[l] * t**(l*sigma)``."""

    __slots__ = ("sigma", "coeffs")

    def __init__(self, sigma, coeffs=()):
        self.sigma = as_sigma(sigma)
        coeffs = np.asarray(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs
        if coeffs.ndim != 1:
            raise ValueError("FracPoly coefficients must be one-dimensional")
        if coeffs.size == 0:
            coeffs = np.zeros(1)
        self.coeffs = _frozen(coeffs)

    @classmethod
    def zero(cls, sigma):
        return cls(sigma, np.zeros(1))

    @classmethod
    def monomial(cls, sigma, k, coef=1.0):
        c = np.zeros(k + 1)
        c[k] = coef
        return cls(sigma, c)

    @classmethod
    def from_map(cls, sigma, mapping):
        """Build from ``{l: coefficient}``."""
        if not mapping:
            return cls.zero(sigma)
        c = np.zeros(max(mapping) + 1)
        for k, v in mapping.items():
            if k < 0:
                raise ValueError("exponent indices must be non-negative")
            c[k] = v
        return cls(sigma, c)

    def to_map(self, tol=0.0):
        return {l: float(v) for l, v in enumerate(self.coeffs) if abs(v) > tol}

    @property
    def degree(self):
        """Highest index with a nonzero coefficient (-1 for the zero polynomial)."""
        nz = [l for l, v in enumerate(self.coeffs) if v != 0]
        return nz[-1] if nz else -1

    def norm(self):
        """Max-abs coefficient norm."""
        return _abs_max(self.coeffs)

    def __len__(self):
        return self.coeffs.size

    def __call__(self, t):
        arr = _check_t(t)
        flat = np.atleast_1d(arr).ravel()
        field = field_of(self.coeffs)
        X = field.powers(flat, self.sigma, self.coeffs.size)
        vals = field.to_float(self.coeffs @ X)
        return vals.reshape(arr.shape) if arr.ndim else float(vals[0])

    def _check(self, other):
        if not isinstance(other, FracPoly):
            raise TypeError(f"expected FracPoly, got {type(other).__name__}")
        if other.sigma != self.sigma:
            raise IncompatibleExponentError(f"sigma mismatch: {self.sigma} vs {other.sigma}")

    def __add__(self, other):
        self._check(other)
        return FracPoly(self.sigma, padded_sum(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return FracPoly(self.sigma, padded_sum(other.coeffs, self.coeffs, alpha=-1))

    def __neg__(self):
        return FracPoly(self.sigma, -self.coeffs)

    def __mul__(self, a):
        if isinstance(a, (FracPoly, FracPolyVec)):
            return NotImplemented
        return FracPoly(self.sigma, self.coeffs * a)

    __rmul__ = __mul__

    def shift(self, k):
        return shift(self, k)

    def trimmed(self):
        d = self.degree
        return FracPoly(self.sigma, self.coeffs[: max(d, 0) + 1])

    def equals(self, other, tol=DEFAULT_TOL):
        self._check(other)
        diff = padded_sum(other.coeffs, self.coeffs, alpha=-1)
        return _abs_max(diff) <= tol

    def __eq__(self, other):
        if not isinstance(other, FracPoly) or other.sigma != self.sigma:
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        terms = ", ".join(f"{l}: {float(v):.6g}" for l, v in enumerate(self.coeffs) if v != 0)
        return f"FracPoly(sigma={self.sigma}, {{{terms}}})"


def eval(p, t):  # noqa: A001 - mirrors the operation name
    """Evaluate ``p`` at ``t >= 0``; ``0**0`` is taken as 1."""
    return p(t)


def axpy(a, p, q):
    """Coefficientwise ``a*p + q``."""
    if isinstance(p, FracPolyVec) or isinstance(q, FracPolyVec):
        if not (isinstance(p, FracPolyVec) and isinstance(q, FracPolyVec)):
            raise TypeError("axpy operands must both be FracPoly or both FracPolyVec")
        if p.sigma != q.sigma:
            raise IncompatibleExponentError(f"sigma mismatch: {p.sigma} vs {q.sigma}")
        return FracPolyVec(p.sigma, padded_sum(p.coeffs, q.coeffs, alpha=a))
    p._check(q)
    return FracPoly(p.sigma, padded_sum(p.coeffs, q.coeffs, alpha=a))


def shift(p, k):
    """Multiply by ``t**(k*sigma)``."""
    if k < 0:
        raise ValueError("shift must be non-negative")
    if k == 0:
        return p
    if isinstance(p, FracPolyVec):
        pad = field_of(p.coeffs).zeros((p.n, k)) if p.coeffs.dtype == object else np.zeros((p.n, k))
        return FracPolyVec(p.sigma, np.concatenate([pad, p.coeffs], axis=1))
    pad = field_of(p.coeffs).zeros(k) if p.coeffs.dtype == object else np.zeros(k)
    return FracPoly(p.sigma, np.concatenate([pad, p.coeffs]))


class FracPolyVec:
    """Vector of ``n`` FracPolys on a common lattice, stored as an (n, L) array."""

    __slots__ = ("sigma", "coeffs")

    def __init__(self, sigma, coeffs):
        self.sigma = as_sigma(sigma)
        coeffs = np.asarray(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs
        if coeffs.ndim != 2:
            raise ValueError("FracPolyVec coefficients must be an (n, L) array")
        if coeffs.shape[1] == 0:
            coeffs = np.zeros((coeffs.shape[0], 1))
        self.coeffs = _frozen(coeffs)

    @classmethod
    def zero(cls, n, sigma, length=1, field=DOUBLE):
        return cls(sigma, field.zeros((n, length)))

    @classmethod
    def unit(cls, n, i, k, sigma, field=DOUBLE):
        """``t**(k*sigma) * e_i`` (0-based component ``i``)."""
        c = field.zeros((n, k + 1))
        c[i, k] = field.scalar(1)
        return cls(sigma, c)

    @classmethod
    def from_entries(cls, entries):
        entries = list(entries)
        if not entries:
            raise ValueError("need at least one component")
        sigma = entries[0].sigma
        for e in entries:
            if e.sigma != sigma:
                raise IncompatibleExponentError("all components must share sigma")
        length = max(len(e) for e in entries)
        rows = [_pad_to(np.asarray(e.coeffs), length) for e in entries]
        return cls(sigma, np.stack(rows))

    @property
    def n(self):
        return self.coeffs.shape[0]

    @property
    def entries(self):
        return tuple(FracPoly(self.sigma, row) for row in self.coeffs)

    def __getitem__(self, i):
        return FracPoly(self.sigma, self.coeffs[i])

    def __len__(self):
        return self.n

    @property
    def degree(self):
        return max(e.degree for e in self.entries)

    def norm(self):
        return _abs_max(self.coeffs)

    def __call__(self, t):
        """Values with shape ``(n,) + shape(t)``."""
        arr = _check_t(t)
        flat = np.atleast_1d(arr).ravel()
        field = field_of(self.coeffs)
        X = field.powers(flat, self.sigma, self.coeffs.shape[1])
        vals = field.to_float(self.coeffs @ X)
        return vals.reshape((self.n,) + arr.shape)

    def _check(self, other):
        if not isinstance(other, FracPolyVec):
            raise TypeError(f"expected FracPolyVec, got {type(other).__name__}")
        if other.sigma != self.sigma:
            raise IncompatibleExponentError(f"sigma mismatch: {self.sigma} vs {other.sigma}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return FracPolyVec(self.sigma, padded_sum(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return FracPolyVec(self.sigma, padded_sum(other.coeffs, self.coeffs, alpha=-1))

    def __neg__(self):
        return FracPolyVec(self.sigma, -self.coeffs)

    def __mul__(self, a):
        if isinstance(a, (FracPoly, FracPolyVec)):
            return NotImplemented
        return FracPolyVec(self.sigma, self.coeffs * a)

    __rmul__ = __mul__

    def shift(self, k):
        return shift(self, k)

    def equals(self, other, tol=DEFAULT_TOL):
        self._check(other)
        return _abs_max(padded_sum(other.coeffs, self.coeffs, alpha=-1)) <= tol

    def __eq__(self, other):
        if not isinstance(other, FracPolyVec) or other.sigma != self.sigma or other.n != self.n:
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        return f"FracPolyVec(sigma={self.sigma}, n={self.n}, entries={list(self.entries)})"


class FracBivar:
    """Kernel expansion ``sum_{p,q} coeffs[p, q] * t**(p*sigma) * s**(q*sigma)``."""

    __slots__ = ("sigma", "coeffs")

    def __init__(self, sigma, coeffs):
        self.sigma = as_sigma(sigma)
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=np.float64))
        if coeffs.ndim != 2:
            raise ValueError("FracBivar coefficients must be a 2-D grid")
        self.coeffs = _frozen(coeffs)

    @classmethod
    def constant(cls, sigma, value):
        return cls(sigma, [[value]])

    @classmethod
    def zero(cls, sigma):
        return cls(sigma, [[0.0]])

    @classmethod
    def from_triples(cls, sigma, triples):
        """Build from an iterable of ``(p, q, coefficient)``."""
        triples = list(triples)
        if not triples:
            return cls.zero(sigma)
        P = max(t[0] for t in triples)
        Q = max(t[1] for t in triples)
        c = np.zeros((P + 1, Q + 1))
        for p, q, v in triples:
            c[p, q] += v
        return cls(sigma, c)

    @property
    def is_zero(self):
        return not np.any(self.coeffs != 0)

    @property
    def max_total_degree(self):
        """Largest ``p + q`` with a nonzero coefficient (-1 if zero)."""
        ps, qs = np.nonzero(self.coeffs)
        return int(np.max(ps + qs)) if ps.size else -1

    def __call__(self, t, s):
        t = _check_t(t)
        s = _check_t(s)
        sig = float(self.sigma)
        tp = np.power.outer(t, sig * np.arange(self.coeffs.shape[0]))
        sp = np.power.outer(s, sig * np.arange(self.coeffs.shape[1]))
        return np.einsum("...p,pq,...q->...", tp, self.coeffs, sp)

    def __repr__(self):
        return f"FracBivar(sigma={self.sigma}, shape={self.coeffs.shape})"
