"""Exception types raised by the library."""


class SharedRandError(ValueError):
    """Base class for invalid inputs and failed constructions."""


class NegativeEntry(SharedRandError):
    pass


class NotNormalized(SharedRandError):
    pass


class ColumnNotNormalized(SharedRandError):
    pass


class OutOfRange(SharedRandError):
    pass


class NotSquare(SharedRandError):
    pass


class DimensionMismatch(SharedRandError):
    pass


class NotHermitian(SharedRandError):
    pass


class NotPositive(SharedRandError):
    """A state or POVM element has an eigenvalue below tolerance."""


class IncompletePovm(SharedRandError):
    pass


class NotTracePreserving(SharedRandError):
    pass


class NonrealProbability(SharedRandError):
    pass


class DecompositionNotFound(SharedRandError):
    """The optimizer budget ran out before the residual target was met."""


class NoCrossing(SharedRandError):
    pass


class OptimizerBudgetExhausted(RuntimeWarning):
    """Issued when a maximin result is returned without a converged start."""
