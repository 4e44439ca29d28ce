"""Commands behind the `swanson` entry point: load a config, run its job, report errors."""

import logging
import sys
from pathlib import Path

from src.controller.cli.schemas.run_config import RunConfig, parse_config
from src.controller.errors.error_responses import EXIT_SUCCESS
from src.controller.errors.exception_manager import manage_cli_exception
from src.controller.errors.exceptions import UsageError, VerificationFailedError
from src.core.config import settings
from src.core.logger import logger, set_console_level
from src.repository.artifacts import ArtifactStore
from src.service.jobs.service import JobApplicationService


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a run configuration file.

    Args:
        path (str | Path): Config file path.

    Raises:
        UsageError: If the file cannot be read as UTF-8 text.
        ConfigParseError: If a line is malformed.
        ConfigValidationError: If a key is unknown, missing or out of range.

    Returns:
        RunConfig: The validated configuration.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as error:
        error_message = f"Cannot read config file {path}: {error}"
        raise UsageError(error_message) from error
    return parse_config(text)


def run(
    config: RunConfig,
    out_dir: str | Path | None = None,
    *,
    dump_matrix: bool = False,
    oracle: bool = False,
    quiet: bool = False,
) -> int:
    """Run the job of a configuration and write its artifacts.

    Args:
        config (RunConfig): Validated configuration.
        out_dir (str | Path | None): Output directory; falls back to the config
            `output` key, then to DEFAULT_OUTPUT_DIR.
        dump_matrix (bool): Also write the h~ and H~ triplet files.
        oracle (bool): Force the nonsymmetric H~ solve.
        quiet (bool): Skip the verification summary on standard output.

    Raises:
        VerificationFailedError: If a verify check fails.

    Returns:
        int: 0 on success.
    """
    store = ArtifactStore(out_dir or config.output or settings.DEFAULT_OUTPUT_DIR)
    logger.info("Running job %s for family %s", config.job, config.profile.family)
    if config.job == "veff":
        JobApplicationService.run_veff(config, store)
    elif config.job == "metric":
        JobApplicationService.run_metric(config, store)
    elif config.job == "spectrum":
        JobApplicationService.run_spectrum(config, store, oracle=oracle, dump_matrix=dump_matrix)
    elif config.job == "sweep":
        JobApplicationService.run_sweep(config, store)
    else:
        verification = JobApplicationService.run_verify(config, store, dump_matrix=dump_matrix)
        if not quiet:
            sys.stdout.write("\n".join(verification.summary()) + "\n")
        if not verification.passed:
            names = ", ".join(check.name for check in verification.failures)
            error_message = f"Failed checks: {names}"
            raise VerificationFailedError(error_message)
    logger.info(
        "Job %s finished, %d artifacts in %s", config.job, len(store.written), store.out_dir
    )
    return EXIT_SUCCESS


def execute(
    config_path: str | Path,
    out_dir: str | Path | None = None,
    *,
    dump_matrix: bool = False,
    oracle: bool = False,
    quiet: bool = False,
) -> int:
    """Load, run and translate any failure into a JSON error and an exit code.

    Returns:
        int: 0 success, 1 verification failure, 2 usage or config error, 3 numeric failure.
    """
    if quiet:
        set_console_level(logging.WARNING)
    try:
        config = load_config(config_path)
        return run(config, out_dir, dump_matrix=dump_matrix, oracle=oracle, quiet=quiet)
    except Exception as error:  # noqa: BLE001
        return manage_cli_exception(error)
