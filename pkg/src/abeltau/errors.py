"""Exception hierarchy shared by all solver modules."""


class AbelTauError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AbelTauError, ValueError):
    """Evaluation point outside the admissible interval."""


class IncompatibleExponentError(AbelTauError, ValueError):
    """Operands live on different exponent lattices (different sigma)."""


class CapacityError(AbelTauError):
    """A requested degree exceeds a configured cap or a built truncation."""


class QuadratureError(AbelTauError, ArithmeticError):
    """A projection quadrature did not converge."""


class SingularStepError(AbelTauError, ArithmeticError):
    """The leading matrix P_r of the canonical recursion is singular."""

    def __init__(self, r, det, scale):
        self.r = r
        self.det = det
        self.scale = scale
        super().__init__(
            f"canonical recursion cannot proceed: P_r singular at r={r} "
            f"(|det|={det:.3e}, scale={scale:.3e})"
        )


class IllPosedTauSystemError(AbelTauError, ArithmeticError):
    """The tau-parameter system M tau = b is singular."""


class UnsupportedInputError(AbelTauError, ValueError):
    """Input cannot be handled by the requested engine."""


class ConfigError(AbelTauError, ValueError):
    """Malformed or invalid problem configuration."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
