"""Exception types raised by the library."""


class OneBitCSError(ValueError):
    """Base class for all errors raised by onebit_cs."""


class InvalidDimensionError(OneBitCSError):
    pass


class DimensionMismatchError(OneBitCSError):
    pass


class InvalidParameterError(OneBitCSError):
    pass


class EmptySupportError(OneBitCSError):
    pass


class RankDeficientError(OneBitCSError):
    """Raised when a least-squares submatrix has numerically dependent columns.

    ``dependent_columns`` holds the positions (within the submatrix) whose
    R diagonal fell below the rank tolerance.
    """

    def __init__(self, message, dependent_columns=()):
        super().__init__(message)
        self.dependent_columns = tuple(dependent_columns)


class ZeroVectorError(OneBitCSError):
    pass
