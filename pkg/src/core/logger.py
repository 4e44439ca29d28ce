"""Module to keep track of loggings in the app.

Everything goes to a rotating log file; the console (stderr) shows records at
SWANSON_LOG_LEVEL and above, so CSV and JSON written to stdout stay clean.
"""

import logging
import os
import shutil
from logging.handlers import RotatingFileHandler
from pathlib import Path

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
MAX_LOG_BYTES = 512 * 1024 * 1024


def _log_file(path: str) -> Path:
    log_path = Path(path).resolve()
    log_path.parent.mkdir(parents=True, exist_ok=True)
    log_path.touch(exist_ok=True)
    return log_path


log_file_path = _log_file(os.getenv("SWANSON_APP_LOG_FILE_PATH", "logs/swanson.log"))
formatter = logging.Formatter(LOG_FORMAT)

# 15% of the disk or 512MB, whichever is smaller
file_handler = RotatingFileHandler(
    log_file_path,
    maxBytes=int(min(0.15 * shutil.disk_usage(log_file_path.parent).total, MAX_LOG_BYTES)),
    backupCount=10,
)
file_handler.setLevel(logging.DEBUG)
file_handler.setFormatter(formatter)

stream_handler = logging.StreamHandler()
stream_handler.setLevel(os.getenv("SWANSON_LOG_LEVEL", "INFO"))
stream_handler.setFormatter(formatter)

logger = logging.getLogger("swanson")
logger.setLevel(logging.DEBUG)
logger.addHandler(file_handler)
logger.addHandler(stream_handler)
logger.propagate = False


def set_console_level(level: int) -> None:
    """Change the verbosity of the console handler only.

    Args:
        level (int): A `logging` level, e.g. `logging.WARNING` for `--quiet`.
    """
    stream_handler.setLevel(level)
