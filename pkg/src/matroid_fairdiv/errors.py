"""Exception hierarchy shared by every module."""


class FairDivError(Exception):
    """Base class for all package errors."""


class InputError(FairDivError, ValueError):
    """Malformed or inconsistent input (unknown good, bad bundle, bad JSON)."""


class CapacityError(FairDivError):
    """An exhaustive procedure would exceed its enumeration budget."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class UnsupportedKindError(FairDivError, TypeError):
    """Operation needs matroid-rank valuations but got something else."""


class PreconditionError(FairDivError):
    """A documented precondition does not hold (e.g. redundant allocation)."""


class RuleError(FairDivError, ValueError):
    """Invalid welfare function: not strictly increasing, too short, not concave."""
