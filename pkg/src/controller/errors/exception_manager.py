"""This module provides utilities for managing exceptions raised by a CLI run.

It logs the exception, fills the error template of its exit code and writes it
to standard error as one JSON object.

Functions:
    manage_cli_exception(exc: Exception) -> int:
        Report an exception and return the process exit code.
"""

import contextlib
import json
import sys
import traceback
from typing import TYPE_CHECKING

from src.controller.errors.error_responses import ERROR_RESPONSES
from src.controller.errors.exception_mapper import exit_code_for
from src.core.config import settings
from src.core.logger import logger

if TYPE_CHECKING:
    from src.controller.cli.schemas.error_message import ErrorMessage


def _log_exception(exc: Exception) -> None:
    exc_str = None
    try:
        exc_str = f"{exc}".replace("\n", " ").replace("   ", " ")
    except Exception:
        exc_str = traceback.format_exc().replace("\n", " ").replace("   ", " ")
    logger.error("%s: %s", type(exc).__name__, exc_str)


def _manage_exception(exc: Exception, code: int) -> int:
    """Manage exceptions.

    Args:
        exc (Exception): Exception
        code (int): Process exit code

    Returns:
        int: The exit code
    """
    _log_exception(exc)
    template: ErrorMessage | None = ERROR_RESPONSES.get(code)
    if not template:
        return code

    error = template.model_copy(deep=True)
    if settings.ENVIRONMENT in ["PYTEST", "DEV", "PREPROD"]:
        with contextlib.suppress(TypeError):
            if error.messages and len(error.messages) > 0:
                error.messages[0].description = json.loads(json.dumps(str(exc)))[:2000] or None
    sys.stderr.write(error.model_dump_json() + "\n")
    return code


def manage_cli_exception(exc: Exception) -> int:
    """Report an exception on standard error and return its exit code.

    Args:
        exc (Exception): The raised exception.

    Returns:
        int: The exit code of the exception.
    """
    return _manage_exception(exc, exit_code_for(exc))
