"""Command-line entry point of the generalized Swanson toolkit."""

import argparse
import sys

from src.controller.cli.commands import execute
from src.controller.errors.exception_manager import manage_cli_exception
from src.controller.errors.exceptions import UsageError


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of the `swanson` command."""
    parser = argparse.ArgumentParser(
        prog="swanson",
        description="Build, solve and verify generalized non-Hermitian Swanson Hamiltonians.",
    )
    parser.add_argument("--config", required=True, help="Run configuration file.")
    parser.add_argument("--out", default=None, help="Output directory (default: out).")
    parser.add_argument(
        "--dump-matrix",
        action="store_true",
        help="Also write h_tilde.triplets and H_tilde.triplets.",
    )
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="Force the dense nonsymmetric solve of H~, on a coarser grid if needed.",
    )
    parser.add_argument("--quiet", action="store_true", help="Only log warnings to the console.")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Parse the command line and run the configured job.

    Args:
        argv (list[str] | None): Arguments without the program name, `sys.argv[1:]` by default.

    Returns:
        int: The process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        if error.code in (0, None):
            return 0
        return manage_cli_exception(UsageError("Invalid command line; see --help."))
    return execute(
        args.config,
        args.out,
        dump_matrix=args.dump_matrix,
        oracle=args.oracle,
        quiet=args.quiet,
    )


if __name__ == "__main__":
    sys.exit(main())
