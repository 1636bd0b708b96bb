"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RealizationError(Exception):
    """Base class for all errors raised by degreal."""


class InvalidInterval(RealizationError, ValueError):
    pass


class NegativeValue(RealizationError, ValueError):
    pass


class InputTooLarge(RealizationError, ValueError):
    pass


class PartOutOfRange(RealizationError, IndexError):
    pass


class InfeasibleInput(RealizationError):
    """A constructor was asked to realize sequences its check rejects."""


class PreconditionViolated(RealizationError):
    """A construction precondition does not hold.

    ``family`` and ``prefix`` name the failing inequality row when the
    violation is an inequality; ``vertex`` is ``(part, index)`` when the
    violation is a per-vertex condition (empty rounded interval).
    """

    def __init__(self, message: str, *, family: str | None = None,
                 prefix: int | None = None, vertex: tuple[int, int] | None = None):
        super().__init__(message)
        self.family = family
        self.prefix = prefix
        self.vertex = vertex


class FuelExhausted(RealizationError):
    pass


class StalemateContradiction(RealizationError):
    pass


class BudgetExhausted(RealizationError):
    """The oracle ran out of search nodes; the verdict is unknown."""


class InstanceTooLarge(RealizationError, ValueError):
    pass
