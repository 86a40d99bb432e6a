"""Exception types shared by all modules."""


class TrlError(Exception):
    """Base class for library errors."""

    exit_code = 1


class InputError(TrlError, ValueError):
    """Malformed input: shape/field mismatch, bad JSON, violated precondition."""

    exit_code = 2


class BudgetExceeded(TrlError):
    """An exhaustive sweep would enumerate more objects than the budget allows."""

    exit_code = 3

    def __init__(self, what, required, limit):
        self.what = what
        self.required = required
        self.limit = limit
        super().__init__(f"{what}: needs {required} enumerated objects, budget is {limit}")


class ConstructionError(TrlError):
    """A constructive procedure could not complete; `stage` names where it stopped."""

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class InvariantViolation(TrlError):
    """A checked mathematical invariant failed."""
