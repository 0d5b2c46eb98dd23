"""Exception hierarchy shared by all modules."""


class NorlundError(Exception):
    """Base class; ``reason`` is a short machine-readable tag."""

    reason = "error"

    def __init__(self, message: str = "", **info):
        super().__init__(message)
        self.info = info


class PoleError(NorlundError, ZeroDivisionError):
    reason = "pole"


class DegenerateParameters(NorlundError, ValueError):
    reason = "degenerate_parameters"


class DegenerateRecurrence(NorlundError, ArithmeticError):
    reason = "degenerate_recurrence"


class ConvergenceViolation(NorlundError, ValueError):
    reason = "convergence_violation"


class NoConvergence(NorlundError, ArithmeticError):
    reason = "no_convergence"


class UnsupportedOrder(NorlundError, ValueError):
    reason = "unsupported_order"


class QuadratureFailure(NorlundError, ArithmeticError):
    reason = "quadrature_failure"
