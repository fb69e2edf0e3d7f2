"""Exception hierarchy shared by every module."""


class SharpTraceError(Exception):
    """Base class for all package errors."""


class DomainError(SharpTraceError, ValueError):
    """Argument outside the mathematical domain (poles, invalid orders)."""


class UsageError(SharpTraceError, ValueError):
    """Caller asked for something the API does not provide."""


class UnsupportedRegimeError(SharpTraceError):
    """Parameters fall in a regime with no implemented evaluation route."""


class ConvergenceError(SharpTraceError, ArithmeticError):
    """A series or iteration did not converge within its budget."""


class StructuralError(SharpTraceError, ValueError):
    """A radial profile does not have the expected r^l * poly(r^2) shape."""


class AccuracyError(SharpTraceError, ArithmeticError):
    """A numeric evaluation could not reach its accuracy target."""


class SqrtPiExponentError(SharpTraceError, ArithmeticError):
    """An exact operation produced a power of sqrt(pi) outside {-1, 0, 1}."""
