"""Exception hierarchy shared by every module."""


class JJError(Exception):
    """Base class for library errors."""


class DimensionMismatch(JJError, ValueError):
    pass


class ConditionFailed(JJError, ValueError):
    """An input failed a structural precondition.

    ``report`` carries the failing conditions and their witnesses when the
    failure came out of one of the checkers.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BudgetExceeded(JJError, RuntimeError):
    """An enumeration would visit more candidates than allowed."""

    def __init__(self, stage, required, budget):
        super().__init__(f"{stage}: {required} candidates exceeds budget {budget}")
        self.stage = stage
        self.required = required
        self.budget = budget


class InputError(JJError, ValueError):
    """A document could not be parsed; the message names the offending entry."""
