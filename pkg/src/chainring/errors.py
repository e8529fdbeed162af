"""Shared exception types."""


class ParameterError(ValueError):
    """An operation received out-of-range or inconsistent parameters."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed its resource budget."""


class NonconvergentError(ValueError):
    """An infinite product or series was requested outside its convergence region."""


class VerificationError(AssertionError):
    """Two independent computations of the same quantity disagree."""
