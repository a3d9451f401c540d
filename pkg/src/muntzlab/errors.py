"""Exception hierarchy shared by all muntzlab modules."""


class MuntzError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(MuntzError, ValueError):
    """A generator or operator parameter is outside its admissible range."""


class InputError(MuntzError, ValueError):
    """Malformed input data (empty sequence, bad file content, ...)."""


class DomainError(MuntzError, ValueError):
    """Evaluation point or exponent set outside the mathematical domain."""


class DegenerateInputError(MuntzError, ValueError):
    """Closed-form node set is degenerate (duplicate exponents)."""


class PrecisionInsufficientError(MuntzError, ArithmeticError):
    """Working precision too low for the requested residual tolerance.

    Carries the achieved residual and the precision that was used so the
    caller can decide how far to escalate.
    """

    def __init__(self, message, residual=None, precision_bits=None):
        super().__init__(message)
        self.residual = residual
        self.precision_bits = precision_bits


class ConvergenceError(MuntzError, ArithmeticError):
    """An iterative scheme failed to reach its tolerance within budget."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature stopped above the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NonMemberSignal(MuntzError, ArithmeticError):
    """Dilation stage could not certify closeness to the closed span."""
