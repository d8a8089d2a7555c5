"""Exception types.

Validation errors carry the measured residual in their message so a
failing construction says which invariant broke and by how much.
"""


class QreboundError(Exception):
    """Base class for all package errors."""


class NotHermitian(QreboundError):
    pass


class NotPositive(QreboundError):
    pass


class TraceNotOne(QreboundError):
    pass


class DimensionMismatch(QreboundError):
    pass


class NotConverged(QreboundError):
    pass


class NegativeInput(QreboundError):
    pass


class NonPositiveInput(QreboundError):
    pass


class NonPositiveEpsilon(QreboundError):
    pass


class EqualMeans(QreboundError):
    """The two states give the same observable mean; the uncertainty
    ratio is undefined there."""


class IncompleteKraus(QreboundError):
    pass


class NotFixedPoint(QreboundError):
    pass


class ZeroFlux(QreboundError):
    pass


class SupportFailure(QreboundError):
    pass


class InvariantViolation(QreboundError):
    """A relation that holds mathematically failed numerically beyond
    tolerance; indicates a bug or a misused construction."""
