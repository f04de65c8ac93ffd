"""Exception types raised across the package."""


class QuditError(ValueError):
    """Base class for every error raised by quditqsv."""


class NotHermitian(QuditError):
    pass


class DimensionMismatch(QuditError):
    pass


class InvalidDensityMatrix(QuditError):
    pass


class IndexOutOfRange(QuditError):
    pass


class EvenDimension(QuditError):
    pass


class NumericalDomain(QuditError):
    pass


class NotNormalized(QuditError):
    pass


class NotOrthogonal(QuditError):
    pass


class DegenerateState(QuditError):
    pass


class SingularAngle(QuditError):
    pass


class NotSeparable(QuditError):
    pass


class UnsupportedDimension(QuditError):
    pass


class InvalidParameter(QuditError):
    pass


class IncompleteFunction(QuditError):
    pass


class BasisMismatch(QuditError):
    pass


class ImpureTarget(QuditError):
    pass
