"""Exception hierarchy shared by every layer of the engine."""


class QCGError(Exception):
    """Base class for all engine errors."""


class SpecError(QCGError, ValueError):
    """Invalid Grassmannian parameters, partitions or user input."""


class InfiniteQuotientError(QCGError):
    """The ideal is not Artinian: the quotient is infinite-dimensional."""


class FormalModeUnavailable(QCGError):
    """Reduction over Q[q] hit a q-dependent leading coefficient."""


class InconsistencyError(QCGError):
    """A mathematical cross-check failed (maps to CLI exit code 2)."""


class PrecisionError(QCGError):
    """A numeric pipeline could not certify its result (CLI exit code 3)."""
