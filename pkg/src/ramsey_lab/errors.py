"""Shared exception types for ramsey_lab."""

from __future__ import annotations


class CapExceededError(RuntimeError):
    """An exhaustive search was asked to run beyond its configured size cap.

    Raised loudly instead of silently truncating the search: callers that
    want a bigger search must raise the cap explicitly.
    """


class InfeasibleDensityError(RuntimeError):
    """No finite edge density makes the hole exponent nonpositive.

    Carries the witnessing grid point ``a`` where the d-coefficient of the
    exponent is nonnegative while the constant part is positive.
    """

    def __init__(self, message: str, a: float | None = None):
        super().__init__(message)
        self.a = a
