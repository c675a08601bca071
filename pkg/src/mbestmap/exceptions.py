"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """Raised when a model, labeling or graph violates its contract."""


class ModelFormatError(InvalidInputError):
    """Raised when a model file cannot be parsed."""


class InvalidStateError(RuntimeError):
    """Raised when solver state breaks an internal invariant."""


class BudgetExhaustedError(RuntimeError):
    """No exclusion-feasible labeling was found within the iteration budget.

    Carries the best dual bound reached and the trace so callers can still
    report a lower bound. ``partial`` holds the solutions found before the
    failing step when raised from the M-best driver.
    """

    def __init__(self, message, dual_bound=None, trace=None, partial=None):
        super().__init__(message)
        self.dual_bound = dual_bound
        self.trace = trace
        self.partial = partial
