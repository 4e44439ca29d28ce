"""Maps process exit codes to the exception classes that produce them."""

from src.controller.errors import exceptions
from src.controller.errors.error_responses import (
    EXIT_NUMERIC,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
)
from src.domain import exceptions as domain_exceptions
from src.repository import exceptions as repository_exceptions
from src.service import exceptions as service_exceptions

EXCEPTION_MAPPER: dict[int, tuple[type[Exception], ...]] = {
    EXIT_VERIFICATION_FAILED: (exceptions.VerificationFailedError,),
    EXIT_USAGE: (
        exceptions.UsageError,
        exceptions.ConfigParseError,
        exceptions.ConfigValidationError,
        domain_exceptions.InvalidParameterError,
        service_exceptions.GridError,
        service_exceptions.EigenRangeError,
        service_exceptions.DimensionTooLargeError,
    ),
    EXIT_NUMERIC: (
        domain_exceptions.BaseExceptionError,
        service_exceptions.BaseExceptionError,
        repository_exceptions.BaseExceptionError,
    ),
}


def exit_code_for(exc: Exception) -> int:
    """Exit code of an exception; anything unmapped is a numeric or module failure.

    Args:
        exc (Exception): The raised exception.

    Returns:
        int: 1, 2 or 3.
    """
    for code, classes in EXCEPTION_MAPPER.items():
        if isinstance(exc, classes):
            return code
    return EXIT_NUMERIC
