"""Error types shared across the package."""

from __future__ import annotations


class InputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class ResourceLimitError(RuntimeError):
    """Raised when an operation would exceed a documented blow-up guard.

    Guards are hard errors: an oracle that silently under-enumerates is
    worse than none.
    """


class LogicInvariantError(RuntimeError):
    """Raised when a cross-check between two code paths disagrees.

    Carries a human-readable witness of the disagreement.
    """


class SearchBudgetExceeded(RuntimeError):
    """Raised when a search exceeds its node or time budget.

    A budget overrun is never reported as a negative answer; callers map
    this to a distinct "unknown" outcome.
    """

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats
