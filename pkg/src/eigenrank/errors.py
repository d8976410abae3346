"""Exception hierarchy shared by all eigenrank modules.

Two broad families matter to callers (and to the CLI exit-code mapping):
``DataError`` for malformed or inconsistent input data, ``NumericalError``
for computations that cannot produce a meaningful result.
"""


class EigenrankError(Exception):
    """Base class for all errors raised by this package."""


class DataError(EigenrankError):
    """Input data is malformed or fails cross-validation."""


class CsvFormatError(DataError):
    """A CSV stream violates its declared format (carries line context)."""


class ValidationError(DataError):
    """Records reference unknown entities or break table invariants."""


class InconsistencyError(DataError):
    """The corpus is internally contradictory (e.g. citations received by
    a journal that published nothing in the window)."""


class NumericalError(EigenrankError):
    """A computation failed or is undefined on the given inputs."""


class ConvergenceError(NumericalError):
    """Fixed-point iteration exhausted its budget without converging."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class DegenerateDataError(NumericalError):
    """Inputs are degenerate for the requested statistic (all zero,
    all equal, empty after filtering, ...)."""


class UndefinedCorrelationError(NumericalError):
    """A correlation is undefined because a series has no variation."""


class DomainError(NumericalError):
    """A value lies outside the mathematical domain of the operation."""
