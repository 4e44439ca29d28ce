"""This module defines standard error responses for the process exit codes.

It provides a dictionary `ERROR_RESPONSES` that maps exit codes to `ErrorMessage` objects.
Each `ErrorMessage` object contains a list of `ErrorMessageData`
objects that provide details about the error.
"""

from src.controller.cli.schemas.error_message import ErrorMessage, ErrorMessageData

EXIT_SUCCESS = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

ERROR_RESPONSES = {
    EXIT_VERIFICATION_FAILED: ErrorMessage(
        exit_code=EXIT_VERIFICATION_FAILED,
        messages=[
            ErrorMessageData(
                code="VERIFICATION_FAILED",
                error_type="ERROR",
                message="Verification failed",
                description="At least one identity or closed-form check"  # noqa: ISC003
                + " did not meet its tolerance; see verify.json.",
            ),
        ],
    ),
    EXIT_USAGE: ErrorMessage(
        exit_code=EXIT_USAGE,
        messages=[
            ErrorMessageData(
                code="CONFIG_ERROR",
                error_type="FATAL",
                message="Invalid usage or configuration",
                description="The command line or the run configuration is incorrect"  # noqa: ISC003
                + " because a key is malformed, unknown, missing or out of range.",
            ),
        ],
    ),
    EXIT_NUMERIC: ErrorMessage(
        exit_code=EXIT_NUMERIC,
        messages=[
            ErrorMessageData(
                code="NUMERIC_ERROR",
                error_type="FATAL",
                message="Numeric failure",
                description="A computation could not be completed:"  # noqa: ISC003
                + " an eigensolver did not converge or a profile left the representable range.",
            ),
        ],
    ),
}
