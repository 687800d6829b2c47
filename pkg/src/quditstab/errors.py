"""Exception types raised by the library.

Every error derives from :class:`QuditError`; the CLI maps the class name onto
the structured error document it prints.
"""


class QuditError(ValueError):
    """Base class for all domain errors."""


class NotInvertible(QuditError):
    pass


class Inconsistent(QuditError):
    """A modular linear system has no solution."""


class InternalContractViolation(QuditError):
    """An internal guarantee failed; the input was not what it claimed to be."""


class DimensionMismatch(QuditError):
    pass


class NotSymplectic(QuditError):
    pass


class PhaseParityViolation(QuditError):
    pass


class EvenDimension(QuditError):
    """The half-phase (odd dimension) representation was requested for even d."""


class IndexOutOfRange(QuditError):
    pass


class InvalidParameter(QuditError):
    pass


class InvalidOperation(QuditError):
    pass


class NonCommuting(QuditError):
    pass


class WrongGroupSize(QuditError):
    pass


class PhaseConditionViolation(QuditError):
    pass


class LabelPhaseMismatch(QuditError):
    pass


class DimensionCap(QuditError):
    """Dense construction refused because d**n exceeds the configured cap."""


class ShapeMismatch(QuditError):
    pass


class LimitExceeded(QuditError):
    """Modulus or matrix size beyond what exact int64 arithmetic supports."""
