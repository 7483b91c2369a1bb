"""Fractional vector canonical polynomials.

``Q_i^j`` and ``R_i^j`` satisfy ``L(Q_i^j) = t**(j sigma) e_i + R_i^j`` with
``R_i^j`` confined to the residual space ``span{t**(l sigma) e_v : l < h_v}``.
For ``j < h_i`` the pair is ``(0, -t**(j sigma) e_i)``; higher members come from
the rank recursion

    Q_j^{h_j+r} = sum_i d_ij (t**((r+Delta_i) sigma) e_i
                              - sum_v sum_{m < r+h_v} Ltilde_{v,i}[r+Delta_i, m] Q_v^m)

with ``D = P_r^{-1}`` and the same combination applied to the residuals.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath.libmp import repr_dps

from ._field import DOUBLE, make_field
from .errors import AbelTauError, CapacityError, SingularStepError
from .fracpoly import FracPolyVec, _abs_max, _pad_to
from .operator import apply_L

__all__ = [
    "CanonicalTable",
    "init_canonicals",
    "p_r_matrix",
    "extend",
    "generate",
    "verify_entry",
    "dump_table",
    "load_table",
]

SINGULAR_TOL = 1e-12
DEFINING_TOL = 1e-10
TABLE_FORMAT_VERSION = 1


@dataclass
class CanonicalTable:
    """Memoised ``(i, j) -> (Q_i^j, R_i^j)`` coefficient arrays (``i`` 0-based)."""

    sigma: Fraction
    heights: np.ndarray
    offsets: np.ndarray
    field: object = dc_field(default=DOUBLE, compare=False)
    q_table: dict = dc_field(default_factory=dict)
    r_table: dict = dc_field(default_factory=dict)
    next_rank: int = 0

    @property
    def n(self):
        return len(self.heights)

    @property
    def s_sets(self):
        return tuple(tuple(range(int(h))) for h in self.heights)

    @property
    def residual_width(self):
        return max(1, int(max(self.heights)))

    @property
    def max_index(self):
        """Largest ``j`` such that ``Q_i^j`` is stored for every ``i``."""
        return int(min(self.heights)) + self.next_rank - 1

    def has(self, i, j):
        return (i, j) in self.q_table

    def q(self, i, j):
        """``Q_i^j`` as a FracPolyVec (``i`` 0-based)."""
        return FracPolyVec(self.sigma, self._get(self.q_table, i, j))

    def r(self, i, j):
        return FracPolyVec(self.sigma, self._get(self.r_table, i, j))

    def q_coeffs(self, i, j):
        return self._get(self.q_table, i, j)

    def r_coeffs(self, i, j):
        return self._get(self.r_table, i, j)

    def _get(self, table, i, j):
        try:
            return table[(i, j)]
        except KeyError:
            raise AbelTauError(
                f"canonical entry (i={i + 1}, j={j}) not generated (table holds ranks < {self.next_rank})"
            ) from None

    def residual_coords(self, arr):
        """Coordinates of a residual-space array in the basis ``{t**(l sigma) e_v : l < h_v}``."""
        out = []
        for v, h in enumerate(self.heights):
            out.extend(arr[v, : int(h)])
        return out

    def residual_leak(self, arr):
        """Largest coefficient of ``arr`` outside the residual space."""
        leak = 0.0
        for v, h in enumerate(self.heights):
            leak = max(leak, _abs_max(np.asarray(arr[v, int(h):])))
        return leak


def init_canonicals(lambda_set):
    """Table holding the initial members ``j in S_i``."""
    ls = lambda_set
    field = ls.field
    table = CanonicalTable(ls.sigma, np.array(ls.heights), np.array(ls.offsets), field)
    w = table.residual_width
    for i in range(ls.n):
        for j in range(int(ls.heights[i])):
            q = field.zeros((ls.n, 1))
            r = field.zeros((ls.n, w))
            r[i, j] = field.scalar(-1)
            q.setflags(write=False)
            r.setflags(write=False)
            table.q_table[(i, j)] = q
            table.r_table[(i, j)] = r
    return table


def _needed_rows(r, lambda_set):
    return r + int(max(lambda_set.offsets)) + 1


def _needed_cols(r, lambda_set):
    return r + int(max(lambda_set.heights)) + 1


def _check_capacity(r, lambda_set):
    if _needed_rows(r, lambda_set) > lambda_set.rows or _needed_cols(r, lambda_set) > lambda_set.cols:
        raise CapacityError(
            f"rank {r} needs a Lambda truncation of at least "
            f"{_needed_rows(r, lambda_set)}x{_needed_cols(r, lambda_set)}, "
            f"have {lambda_set.rows}x{lambda_set.cols}"
        )


def p_r_matrix(r, lambda_set):
    """``P_r[i, j] = Ltilde_{i,j}(r + Delta_j + 1, r + h_i + 1)`` (1-based) and ``D = P_r^{-1}``."""
    ls = lambda_set
    _check_capacity(r, ls)
    field = ls.field
    n = ls.n
    P = field.zeros((n, n))
    for i in range(n):
        for j in range(n):
            P[i, j] = ls.lambda_tildes[i][j][r + int(ls.offsets[j]), r + int(ls.heights[i])]
    det = field.det(P)
    scale = _abs_max(P) ** n
    if abs(det) <= SINGULAR_TOL * scale or scale == 0:
        raise SingularStepError(r, float(det), float(scale))
    return P, field.inv(P)


def extend(table, r, lambda_set):
    """Add ``Q_j^{h_j+r}, R_j^{h_j+r}`` for every ``j``; ranks must arrive in order."""
    ls = lambda_set
    if r != table.next_rank:
        raise AbelTauError(f"canonical ranks must be generated in order: expected {table.next_rank}, got {r}")
    field = table.field
    n = ls.n
    h = [int(x) for x in ls.heights]
    off = [int(x) for x in ls.offsets]
    _, D = p_r_matrix(r, ls)
    width = r + max(off) + 1
    rw = table.residual_width

    A, B = [], []
    for i in range(n):
        row = r + off[i]
        a = field.zeros((n, width))
        a[i, row] = field.scalar(1)
        b = field.zeros((n, rw))
        for v in range(n):
            coeffs = ls.lambda_tildes[v][i][row]
            for m in range(r + h[v]):
                c = coeffs[m]
                if c == 0:
                    continue
                q = table.q_coeffs(v, m)
                a[:, : q.shape[1]] -= c * q
                b -= c * table.r_coeffs(v, m)
        A.append(a)
        B.append(b)

    for j in range(n):
        q = field.zeros((n, width))
        res = field.zeros((n, rw))
        for i in range(n):
            d = D[i, j]
            if d == 0:
                continue
            q += d * A[i]
            res += d * B[i]
        q.setflags(write=False)
        res.setflags(write=False)
        table.q_table[(j, h[j] + r)] = q
        table.r_table[(j, h[j] + r)] = res
    table.next_rank = r + 1
    return table


def verify_entry(table, i, j, lambda_set, tol=DEFINING_TOL):
    """Defect ``||L Q_i^j - t**(j sigma) e_i - R_i^j||`` relative to ``1 + ||Q_i^j||``."""
    q = table.q(i, j)
    lq = apply_L(q, lambda_set).coeffs
    target = _pad_to(table.r_coeffs(i, j), lq.shape[1]).copy()
    if j >= target.shape[1]:
        target = _pad_to(target, j + 1).copy()
        lq = _pad_to(lq, j + 1)
    target[i, j] += table.field.scalar(1)
    defect = _abs_max(lq - target) / (1.0 + q.norm())
    if defect > tol:
        raise AbelTauError(f"defining relation violated for (i={i + 1}, j={j}): defect {defect:.3e}")
    return defect


def generate(table, up_to, lambda_set, verify=False):
    """Extend the table until ``Q_i^j`` exists for every ``i`` and every ``j <= up_to``.

    Ranks already present are not recomputed.
    """
    last_rank = up_to - int(min(lambda_set.heights))
    for r in range(table.next_rank, last_rank + 1):
        extend(table, r, lambda_set)
        if verify:
            for j in range(table.n):
                verify_entry(table, j, int(lambda_set.heights[j]) + r, lambda_set)
    return table


def _enc(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    # enough decimal digits for the value to survive a round trip
    return mpmath.nstr(v, repr_dps(v.context.prec), strip_zeros=False)


def dump_table(table, fp=None):
    """Serialise the table to JSON text (and write it to ``fp`` when given)."""
    payload = {
        "format": "abeltau-canonical",
        "version": TABLE_FORMAT_VERSION,
        "sigma": str(table.sigma),
        "heights": [int(h) for h in table.heights],
        "offsets": [int(o) for o in table.offsets],
        "dps": table.field.dps,
        "next_rank": table.next_rank,
        "entries": [
            {
                "i": i,
                "j": j,
                "q": [[_enc(v) for v in row] for row in table.q_table[(i, j)]],
                "r": [[_enc(v) for v in row] for row in table.r_table[(i, j)]],
            }
            for (i, j) in sorted(table.q_table)
        ],
    }
    text = json.dumps(payload)
    if fp is not None:
        fp.write(text)
    return text


def load_table(text):
    """Inverse of :func:`dump_table`."""
    data = json.loads(text) if isinstance(text, str) else json.load(text)
    if data.get("format") != "abeltau-canonical" or data.get("version") != TABLE_FORMAT_VERSION:
        raise AbelTauError("not a canonical table dump of a supported version")
    field = make_field(data["dps"])
    table = CanonicalTable(
        Fraction(data["sigma"]), np.array(data["heights"]), np.array(data["offsets"]), field
    )
    for e in data["entries"]:
        q = field.asarray([[float(v) if field.is_double else field.ctx.mpf(v) for v in row] for row in e["q"]])
        r = field.asarray([[float(v) if field.is_double else field.ctx.mpf(v) for v in row] for row in e["r"]])
        q.setflags(write=False)
        r.setflags(write=False)
        table.q_table[(e["i"], e["j"])] = q
        table.r_table[(e["i"], e["j"])] = r
    table.next_rank = data["next_rank"]
    return table
