"""Exception hierarchy shared by all modules.

Errors split into two families: ``ValidationError`` for inputs that violate a
precondition (CLI exit code 2) and ``NumericalError`` for computations whose
accuracy check failed (CLI exit code 3).
"""


class LandauError(Exception):
    exit_code = 2


class ValidationError(LandauError, ValueError):
    exit_code = 2


class NumericalError(LandauError, ArithmeticError):
    exit_code = 3


class InvalidParameter(ValidationError):
    pass


class CriticalRegime(ValidationError):
    """The field sits at (or beyond) B_c = 1/(e*theta); the symplectic form is singular."""


class EmptySpectrum(ValidationError):
    pass


class OverflowGuard(ValidationError):
    """|z|^2 exceeds the Fock cutoff; raise N."""


class DegenerateTemperature(ValidationError):
    """beta*hbar*omega outside [1e-10, 700]."""


class DeltaLimit(ValidationError):
    """Mean occupancy too small for the P-function to be resolved on a grid."""


class DimMismatch(ValidationError):
    pass


class DomainGuard(ValidationError):
    """Displacement argument too large for the truncated matrix to stay unitary."""


class CutoffTooSmall(ValidationError):
    pass


class InvalidDensity(ValidationError):
    pass


class QuadratureDivergence(NumericalError):
    pass


class ThresholdBreach(NumericalError):
    pass
