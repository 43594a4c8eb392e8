"""Exception types shared across the package.

Each class carries the process exit code the CLI uses when it escapes.
"""


class HFunctionError(Exception):
    exit_code = 1
    code = "error"


class DomainError(HFunctionError, ValueError):
    """Argument outside the supported domain."""

    exit_code = 2
    code = "domain"


class ConvergenceError(HFunctionError, RuntimeError):
    """An iterative procedure stopped before meeting its tolerance.

    ``partial`` holds the last available estimate (a partial series sum or
    the last fixed-point iterate) and ``residual`` the size of the last
    update, so callers can decide whether the value is still usable.
    """

    exit_code = 3
    code = "convergence"

    def __init__(self, message, partial=None, residual=None, iterations=None):
        super().__init__(message)
        self.partial = partial
        self.residual = residual
        self.iterations = iterations


class PoleError(HFunctionError, ArithmeticError):
    """A closed-form or truncated expression hit a vanishing denominator."""

    exit_code = 2
    code = "pole"
