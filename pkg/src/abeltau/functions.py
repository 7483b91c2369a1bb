"""Built-in special functions usable as forcing or exact-solution components.

Each entry provides vectorised values on [0, 1] and, for the series oracle,
its expansion in powers ``t**(mu/gamma)``. A config may reference these by
name but cannot define new code.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import beta, erfcx, gamma

from .errors import UnsupportedInputError

__all__ = ["Builtin", "BUILTINS", "get_builtin"]

_ABEL_NODES = 40


@dataclass(frozen=True)
class Builtin:
    name: str
    func: Callable
    series: Callable  # (M, gamma) -> array of length M + 1
    description: str = ""


def _need_multiple(name, gamma_, k):
    if gamma_ % k:
        raise UnsupportedInputError(
            f"'{name}' expands in powers t**(1/{k}); lattice 1/{gamma_} cannot represent it"
        )


def _arctan_sqrt(t):
    return np.arctan(np.sqrt(np.asarray(t, dtype=np.float64)))


def _arctan_sqrt_series(M, gamma_):
    # arctan(sqrt t) = sum (-1)^k t^(k + 1/2) / (2k + 1)
    _need_multiple("arctan_sqrt", gamma_, 2)
    out = np.zeros(M + 1)
    k = 0
    while (mu := (2 * k + 1) * gamma_ // 2) <= M:
        out[mu] = (-1) ** k / (2 * k + 1)
        k += 1
    return out


def _abel_arctan_sqrt(t):
    """``int_0^t (t - s)**(-3/4) arctan(sqrt s) ds``.

    With ``s = t u**2`` and ``1 - u = v**4`` the integrand is smooth in ``v``,
    so plain Gauss-Legendre reaches machine precision.
    """
    t = np.asarray(t, dtype=np.float64)
    x, w = leggauss(_ABEL_NODES)
    v = (1.0 + x) / 2.0
    u = 1.0 - v**4
    weight = 4.0 * w * u * (1.0 + u) ** -0.75
    flat = np.atleast_1d(t).ravel()
    vals = flat**0.25 * (np.arctan(np.sqrt(flat)[:, None] * u[None, :]) @ weight)
    return vals.reshape(t.shape)


def _abel_arctan_sqrt_series(M, gamma_):
    # termwise: int (t-s)^(-3/4) s^(k+1/2) ds = B(1/4, k + 3/2) t^(k + 3/4)
    _need_multiple("abel_arctan_sqrt", gamma_, 4)
    out = np.zeros(M + 1)
    k = 0
    while (mu := (4 * k + 3) * gamma_ // 4) <= M:
        out[mu] = (-1) ** k * beta(0.25, k + 1.5) / (2 * k + 1)
        k += 1
    return out


def _erfc_comb(t):
    return erfcx(np.sqrt(np.pi * np.asarray(t, dtype=np.float64)))


def _erfc_comb_series(M, gamma_):
    # exp(x^2) erfc(x) = sum (-x)^k / Gamma(k/2 + 1), x = sqrt(pi t)
    _need_multiple("erfc_comb", gamma_, 2)
    out = np.zeros(M + 1)
    step = gamma_ // 2
    for k in range(M // step + 1):
        out[k * step] = (-1) ** k * np.pi ** (k / 2) / gamma(k / 2 + 1)
    return out


BUILTINS = {
    b.name: b
    for b in (
        Builtin("arctan_sqrt", _arctan_sqrt, _arctan_sqrt_series, "arctan(sqrt(t))"),
        Builtin(
            "abel_arctan_sqrt",
            _abel_arctan_sqrt,
            _abel_arctan_sqrt_series,
            "int_0^t (t-s)^(-3/4) arctan(sqrt(s)) ds",
        ),
        Builtin("erfc_comb", _erfc_comb, _erfc_comb_series, "exp(pi t) erfc(sqrt(pi t))"),
    )
}


def get_builtin(name):
    try:
        return BUILTINS[name]
    except KeyError:
        raise UnsupportedInputError(
            f"unknown built-in function '{name}' (available: {', '.join(sorted(BUILTINS))})"
        ) from None
