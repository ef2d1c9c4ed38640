"""Exception hierarchy shared by every module."""


class CblocksError(Exception):
    """Base class for all package errors."""


class StructuralError(CblocksError, ValueError):
    """Malformed input: bad graph, wrong edge keys, mismatched graphs."""


class BudgetExceeded(CblocksError):
    """A search or enumeration ran past its node budget.

    Never a silent truncation: the caller must treat the result as unknown.
    """

    def __init__(self, budget: int, what: str = "search"):
        super().__init__(f"{what} exceeded node budget of {budget}")
        self.budget = budget
        self.what = what


class TheoremViolation(CblocksError, AssertionError):
    """A constructive step produced something the theory says is impossible."""
