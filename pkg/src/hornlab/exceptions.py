"""Exception hierarchy.

Every error raised by the package derives from :class:`HornError`, which is
itself a :class:`ValueError` so callers that only expect bad-input errors
keep working.
"""


class HornError(ValueError):
    """Base class for all package errors."""


class NotHermitian(HornError):
    pass


class NotUnitary(HornError):
    pass


class ConvergenceFailure(HornError, ArithmeticError):
    pass


class SingularInput(HornError):
    pass


class IndexOutOfRange(HornError, IndexError):
    pass


class SingularMinor(HornError):
    pass


class InvalidInstance(HornError):
    pass


class NonPositiveEigenvalue(HornError):
    pass


class DegenerateIndex(HornError):
    """Two entries of a spherical index coincide where the formula needs them apart."""


class InvalidCase(HornError):
    pass


class LengthMismatch(HornError):
    pass


class DegenerateSpectrum(HornError):
    """An evaluation point touches the fixed spectrum (``c_k == a_j``)."""


class UnsupportedDimension(HornError):
    pass


class TruncationTooSmall(HornError):
    pass


class QuadratureNotConverged(HornError, ArithmeticError):
    pass


class EmptySample(HornError):
    pass


class UnderpoweredTest(EmptySample):
    """Too few samples for the asymptotic KS threshold to be meaningful."""
