"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class QuadratureError(ArithmeticError):
    """A quadrature did not reach its tolerance within the node budget.

    The last estimate and the residual are kept so callers can decide
    whether the value is still usable.
    """

    def __init__(self, message, estimate, residual):
        super().__init__(f"{message} (estimate={estimate!r}, residual={residual:.3e})")
        self.estimate = estimate
        self.residual = residual


class ConvergenceError(ArithmeticError):
    """An iterative method exhausted its iteration budget."""

    def __init__(self, message, last):
        super().__init__(message)
        self.last = last


class RootFindingError(ArithmeticError):
    """Computed polynomial roots fail the residual check."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual
