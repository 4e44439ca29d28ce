"""Exceptions for the command-line surface."""


class BaseCLIError(Exception):
    """Base CLI error."""

    def __init__(self: "BaseCLIError", message: str = "") -> None:
        """Initialize BaseCLIError."""
        self.message = message
        super().__init__(self.message)

    def __str__(self: "BaseCLIError") -> str:
        """Return string representation of the error."""
        return self.message


class UsageError(BaseCLIError):
    """Wrong command-line usage, e.g. a missing or unreadable config file."""

    def __init__(
        self: "UsageError",
        message: str = "The command line is incorrect: check the flags and the config path.",
    ) -> None:
        """Initialize UsageError."""
        self.message = message
        super().__init__(self.message)


class ConfigParseError(BaseCLIError):
    """A config line is not of the form `section.key = value`."""

    def __init__(self: "ConfigParseError", message: str, line: int) -> None:
        """Initialize ConfigParseError with the offending line number."""
        self.line = line
        self.message = f"line {line}: {message}"
        super().__init__(self.message)


class ConfigValidationError(BaseCLIError):
    """A config value is missing, unknown or out of range."""

    def __init__(self: "ConfigValidationError", message: str, key: str) -> None:
        """Initialize ConfigValidationError naming the offending key."""
        self.key = key
        self.message = f"{key}: {message}"
        super().__init__(self.message)


class VerificationFailedError(BaseCLIError):
    """At least one check of the verify suite failed its tolerance."""

    def __init__(
        self: "VerificationFailedError",
        message: str = "One or more verification checks failed.",
    ) -> None:
        """Initialize VerificationFailedError."""
        self.message = message
        super().__init__(self.message)
