"""Exception hierarchy shared across the library."""


class ChanordError(Exception):
    """Base class for library errors."""


class DimensionMismatchError(ChanordError, ValueError):
    """Operands have incompatible alphabet sizes."""


class ResourceLimitError(ChanordError):
    """An enumeration or pivot budget was exceeded.

    Deliberately distinct from any "no" answer: callers must never read a
    resource failure as a negative verdict.
    """


class LpInfeasibleError(ChanordError):
    """maximize() was called on an infeasible program."""


class LpUnboundedError(ChanordError):
    """The objective is unbounded above on the feasible region."""


class InternalCheckError(ChanordError):
    """An internally produced certificate failed its own verification."""
