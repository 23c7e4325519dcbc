from typing import Optional


class BulkSpannerError(Exception):
    """Base class for every error raised by the package."""


class InstanceValidationError(BulkSpannerError, ValueError):
    """Raised when an instance fails validation; carries the full report."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class InfeasibleError(BulkSpannerError):
    """No solution exists within the requested budgets."""


class RcspInfeasible(InfeasibleError):
    """No valid-pattern path reaches the sink within the hop bound."""


class LpInfeasible(InfeasibleError):
    """The thin-pair master LP cannot cover the required number of pairs."""


class NoResolvablePairs(InfeasibleError):
    """No junction tree resolves any pair at any root."""


class CapExceededError(BulkSpannerError, RuntimeError):
    """A configured size cap was exceeded."""

    def __init__(self, message: str, size: Optional[int] = None, cap: Optional[int] = None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class PatternSpaceOverflow(CapExceededError):
    pass


class LayerRangeOverflow(CapExceededError):
    pass


class TreeSizeOverflow(CapExceededError):
    pass


class OracleCapExceeded(CapExceededError):
    pass


class TauExhausted(CapExceededError):
    pass


class ReductionChainError(BulkSpannerError, RuntimeError):
    """A reduction step produced an object its inverse cannot map back."""


class GreedyStallError(BulkSpannerError, RuntimeError):
    """A greedy round resolved no pair."""


class SolverError(BulkSpannerError, RuntimeError):
    """A numeric backend failed or returned a result breaking its own contract."""
