"""Recursive Tau method for systems of Abel-Volterra integral equations.

Unknowns are represented as polynomials in fractional powers ``t**(l*sigma)``;
the solver builds canonical polynomials once and reuses them for every
approximation degree ``N``.
"""
from ._field import DOUBLE, make_field
from .basis import MuntzBasis, muntz_legendre, project
from .canonical import CanonicalTable, generate, init_canonicals
from .errors import (
    AbelTauError,
    CapacityError,
    ConfigError,
    DomainError,
    IllPosedTauSystemError,
    IncompatibleExponentError,
    QuadratureError,
    SingularStepError,
    UnsupportedInputError,
)
from .fracpoly import FracBivar, FracPoly, FracPolyVec
from .operator import Forcing, LambdaSet, Problem, apply_L, build_lambda_set
from .problems import example
from .series import SeriesSolution, series_coeffs
from .tau import TauSolution, TauSolver, solve, sup_error, tau_decay_report

__version__ = "0.1.0"

__all__ = [
    "DOUBLE",
    "make_field",
    "MuntzBasis",
    "muntz_legendre",
    "project",
    "CanonicalTable",
    "generate",
    "init_canonicals",
    "AbelTauError",
    "CapacityError",
    "ConfigError",
    "DomainError",
    "IllPosedTauSystemError",
    "IncompatibleExponentError",
    "QuadratureError",
    "SingularStepError",
    "UnsupportedInputError",
    "FracBivar",
    "FracPoly",
    "FracPolyVec",
    "Forcing",
    "LambdaSet",
    "Problem",
    "apply_L",
    "build_lambda_set",
    "example",
    "SeriesSolution",
    "series_coeffs",
    "TauSolution",
    "TauSolver",
    "solve",
    "sup_error",
    "tau_decay_report",
]
