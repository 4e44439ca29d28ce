class BaseExceptionError(Exception):
    """Base class for exceptions in this module."""

    def __init__(self, message: str = "An error occurred."):
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return self.message


class InvalidParameterError(BaseExceptionError):
    """Raised when a profile or model parameter is outside its admissible range."""


class PositivityViolationError(InvalidParameterError):
    """Raised when a(x) <= 0 is encountered where a positive profile is required."""


class ExpressionError(InvalidParameterError):
    """Raised when a custom profile expression falls outside the supported grammar."""


class SingularGeneratorError(BaseExceptionError):
    """Raised when the generator derivative g'(x) vanishes on the domain."""


class RangeError(BaseExceptionError):
    """Raised when profile values overflow the supported dynamic range."""


class NoRealSpectrumError(BaseExceptionError):
    """Raised when the harmonic model has omega^2 <= 4 alpha beta."""


class ComplexLambdaError(BaseExceptionError):
    """Raised when the solitonic Delta is not positive, so lambda is not real."""


class NotFactorizableError(BaseExceptionError):
    """Raised when both alpha and beta are nonzero in the factorization scheme."""


class OracleMismatchError(BaseExceptionError):
    """Raised when a symbolic oracle disagrees with its closed-form counterpart."""
