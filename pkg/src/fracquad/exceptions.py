"""Exception and warning types shared across the package."""


class FracquadError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FracquadError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """The gamma function was evaluated at one of its poles (0, -1, -2, ...)."""


class DegenerateMethodError(FracquadError, ValueError):
    """The multistep generating functions describe an explicit method, whose
    weight series has no constant term and cannot drive a fractional rule."""


class SingularSystemError(FracquadError, ArithmeticError):
    """The starting-weight correction system is numerically singular."""


class GridMismatchError(FracquadError, ValueError):
    """Signal and weights were built for different grid spacings."""


class LengthError(FracquadError, ValueError):
    """A weight sequence is too short for the signal it should integrate."""


class AlignmentError(FracquadError, ValueError):
    """The grid length does not tile into the panels required by the rule."""


class ToleranceNotMet(FracquadError, ArithmeticError):
    """Adaptive refinement exhausted its evaluation budget before reaching
    the requested tolerance."""


class FitError(FracquadError, ArithmeticError):
    """A steady-state sinusoid fit left a residual too large to trust."""


class ResonanceWarning(UserWarning):
    """An oscillator mode was evaluated at or next to an undamped resonance."""
