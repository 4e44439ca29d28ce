"""Run configuration: the line-based `section.key = value` file and its validated model.

A config file holds one assignment per line, `#` starts a comment, and a line
may carry several comma-separated assignments where keys without a section
inherit the section of the first one::

    profile.family = solitonic
    profile.q = 1, kappa = 2
    model.omega = 1.1, alpha = 0.1, beta = 0
    grid.n = 4000
    job = spectrum
    k = 4
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.controller.errors.exceptions import ConfigParseError, ConfigValidationError
from src.domain.exceptions import InvalidParameterError
from src.domain.model import ModelParams

JobName = Literal["veff", "metric", "spectrum", "verify", "sweep"]
ProfileFamily = Literal[
    "harmonic", "solitonic", "morse", "exponential", "canonical-from-g", "custom"
]
GeneratorFamily = Literal["harmonic", "solitonic", "exponential", "custom"]
SweepParameter = Literal["omega", "alpha", "beta", "q", "kappa", "p", "mu"]

LEVELED_JOBS = ("spectrum", "verify", "sweep")
SWEEP_OWNERS = {
    "q": {"solitonic"},
    "kappa": {"solitonic"},
    "p": {"morse", "exponential"},
}

_STRICT = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class ProfileBlock(BaseModel):
    """Profile block: `profile.family` plus the parameters that family needs."""

    model_config = _STRICT

    family: ProfileFamily = Field(examples=["solitonic"])
    generator: GeneratorFamily | None = Field(default=None, examples=["solitonic"])
    q: float | None = Field(default=None, examples=[1.0])
    kappa: float | None = Field(default=None, examples=[2.0])
    p: float | None = Field(default=None, examples=[1.0])
    mu: float = Field(default=0.0, examples=[0.0])
    expr_a: str | None = Field(default=None, min_length=1, examples=["cosh(x)"])
    expr_b: str = Field(default="0", min_length=1, examples=["2*sinh(x)"])

    @model_validator(mode="after")
    def check_family_parameters(self: "ProfileBlock") -> "ProfileBlock":
        """Validates that the parameters of the chosen family are present and admissible.

        Raises:
            ValueError: If a required parameter is missing or out of range.

        Returns:
            ProfileBlock: The validated block.
        """
        family = self.generator if self.family == "canonical-from-g" else self.family
        if self.family == "canonical-from-g" and self.generator is None:
            error_message = "family canonical-from-g requires profile.generator"
            raise ValueError(error_message)
        if self.family != "canonical-from-g" and self.generator is not None:
            error_message = "profile.generator is only used by family canonical-from-g"
            raise ValueError(error_message)
        if family == "solitonic":
            if self.q is None or self.q <= 0:
                error_message = "profile.q > 0 required for the solitonic profile"
                raise ValueError(error_message)
            kappa_ok = self.kappa is not None and self.kappa > 0.5  # noqa: PLR2004
            if self.family == "solitonic" and not kappa_ok:
                error_message = "profile.kappa > 1/2 required for the solitonic profile"
                raise ValueError(error_message)
        if family in {"morse", "exponential"} and (self.p is None or self.p == 0):
            error_message = f"profile.p != 0 required for the {family} profile"
            raise ValueError(error_message)
        if family == "custom" and self.expr_a is None:
            error_message = "profile.expr_a required for the custom profile"
            raise ValueError(error_message)
        return self


class ModelBlock(BaseModel):
    """Model block: omega, alpha and beta, all required."""

    model_config = _STRICT

    omega: float = Field(examples=[2.0])
    alpha: float = Field(examples=[0.4])
    beta: float = Field(examples=[0.2])

    @model_validator(mode="after")
    def check_omega_tilde(self: "ModelBlock") -> "ModelBlock":
        """Validates omega~ = omega - alpha - beta > 0.

        Raises:
            ValueError: With the model's own message if omega~ <= 0.

        Returns:
            ModelBlock: The validated block.
        """
        try:
            self.to_params()
        except InvalidParameterError as error:
            raise ValueError(str(error)) from error
        return self

    def to_params(self: "ModelBlock") -> ModelParams:
        """Domain parameters of this block."""
        return ModelParams(omega=self.omega, alpha=self.alpha, beta=self.beta)


class GridBlock(BaseModel):
    """Grid block: node count and an optional explicit domain."""

    model_config = _STRICT

    n: int = Field(ge=16, examples=[2000])
    x_min: float | None = Field(default=None, examples=[-10.0])
    x_max: float | None = Field(default=None, examples=[10.0])

    @model_validator(mode="after")
    def check_domain(self: "GridBlock") -> "GridBlock":
        """Validates that both or neither boundaries are given, in order.

        Raises:
            ValueError: If only one boundary is given or x_min >= x_max.

        Returns:
            GridBlock: The validated block.
        """
        if (self.x_min is None) != (self.x_max is None):
            error_message = "grid.x_min and grid.x_max must be given together"
            raise ValueError(error_message)
        if self.x_min is not None and self.x_max is not None and self.x_min >= self.x_max:
            error_message = "grid.x_min must be smaller than grid.x_max"
            raise ValueError(error_message)
        return self


class SweepBlock(BaseModel):
    """Sweep block: one parameter varied over an inclusive linear range."""

    model_config = _STRICT

    parameter: SweepParameter = Field(examples=["alpha"])
    start: float = Field(examples=[0.0])
    stop: float = Field(examples=[0.5])
    steps: int = Field(ge=2, le=10_000, examples=[11])


class RunConfig(BaseModel):
    """A validated run configuration.

    Attributes:
        profile (ProfileBlock): Ladder-operator profile.
        model (ModelBlock): Swanson parameters.
        grid (GridBlock): Discretization.
        job (JobName): Job to run.
        k (int | None): Number of levels for spectrum, verify and sweep.
        output (str | None): Output directory, overridden by `--out`.
        sweep (SweepBlock | None): Sweep range, required for the sweep job.
    """

    model_config = _STRICT

    profile: ProfileBlock
    model: ModelBlock
    grid: GridBlock
    job: JobName = Field(examples=["spectrum"])
    k: int | None = Field(default=None, ge=1, examples=[5])
    output: str | None = Field(default=None, min_length=1, examples=["out"])
    sweep: SweepBlock | None = None

    @model_validator(mode="after")
    def check_job_blocks(self: "RunConfig") -> "RunConfig":
        """Validates that the blocks the job needs are present.

        Raises:
            ValueError: If k or the sweep block is missing or misplaced.

        Returns:
            RunConfig: The validated config.
        """
        if self.job in LEVELED_JOBS and self.k is None:
            error_message = f"job {self.job} requires k"
            raise ValueError(error_message)
        if self.k is not None and self.k > self.grid.n:
            error_message = f"k = {self.k} exceeds grid.n = {self.grid.n}"
            raise ValueError(error_message)
        if (self.job == "sweep") != (self.sweep is not None):
            error_message = "the sweep block is required by, and only by, job sweep"
            raise ValueError(error_message)
        if self.sweep is not None and self.sweep.parameter in SWEEP_OWNERS:
            owners = SWEEP_OWNERS[self.sweep.parameter]
            if not owners & {self.profile.family, self.profile.generator}:
                needed = " or ".join(sorted(owners))
                error_message = (
                    f"sweep.parameter = {self.sweep.parameter} needs a {needed} profile"
                )
                raise ValueError(error_message)
        return self


def _split_assignments(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    parts, depth, current = [], 0, []
    for character in text:
        if character == "(":
            depth += 1
        elif character == ")":
            depth -= 1
        if character == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(character)
    parts.append("".join(current))
    return parts


def _assign(tree: dict, key: str, value: str, line: int) -> None:
    section, _, name = key.rpartition(".")
    if "." in section:
        error_message = f"key {key!r} is nested too deeply"
        raise ConfigParseError(error_message, line)
    target = tree.setdefault(section, {}) if section else tree
    if not isinstance(target, dict):
        error_message = f"section {section!r} is also used as a plain key"
        raise ConfigParseError(error_message, line)
    if name in target:
        error_message = f"duplicate key {key!r}"
        raise ConfigParseError(error_message, line)
    target[name] = value


def parse_lines(text: str) -> dict:
    """Parse the config text into a nested dict of raw string values.

    Args:
        text (str): Config file content.

    Raises:
        ConfigParseError: With the line number of a malformed line.

    Returns:
        dict: `{"section": {"key": "value"}, "job": "value", ...}`.
    """
    tree: dict = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        section = ""
        for position, assignment in enumerate(_split_assignments(content)):
            key, separator, value = (part.strip() for part in assignment.partition("="))
            if not separator or not key or not value:
                error_message = f"expected 'section.key = value', got {assignment.strip()!r}"
                raise ConfigParseError(error_message, number)
            if any(character.isspace() for character in key):
                error_message = f"key {key!r} contains whitespace"
                raise ConfigParseError(error_message, number)
            if position == 0:
                section = key.rpartition(".")[0]
            elif "." not in key:
                if not section:
                    error_message = f"key {key!r} has no section to inherit"
                    raise ConfigParseError(error_message, number)
                key = f"{section}.{key}"
            _assign(tree, key, value, number)
    return tree


def parse_config(text: str) -> RunConfig:
    """Parse and validate a run configuration.

    Args:
        text (str): Config file content.

    Raises:
        ConfigParseError: If a line is malformed.
        ConfigValidationError: If a key is unknown, missing or out of range.

    Returns:
        RunConfig: The validated configuration.
    """
    tree = parse_lines(text)
    try:
        return RunConfig.model_validate(tree)
    except ValidationError as error:
        first = error.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or "config"
        message = first["msg"].removeprefix("Value error, ")
        if first["type"] == "extra_forbidden":
            message = "unknown key"
        elif first["type"] == "missing":
            message = "required key is missing"
        raise ConfigValidationError(message, key) from error


def sweep_values(sweep: SweepBlock) -> list[float]:
    """Inclusive, evenly spaced sweep points."""
    span = sweep.stop - sweep.start
    return [sweep.start + span * index / (sweep.steps - 1) for index in range(sweep.steps)]
