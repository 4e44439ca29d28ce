"""Maps validated run-config blocks onto domain objects."""

from src.controller.cli.schemas.run_config import ProfileBlock, RunConfig
from src.domain.model import ModelParams
from src.domain.profiles import (
    Profile,
    canonical_b_from_g,
    make_custom,
    make_exponential,
    make_harmonic,
    make_morse,
    make_solitonic,
)
from src.service.discrete.grid import Grid, default_grid

MODEL_KEYS = ("omega", "alpha", "beta")


def _family_profile(family: str, block: ProfileBlock, values: dict[str, float]) -> Profile:
    if family == "harmonic":
        return make_harmonic()
    if family == "solitonic":
        return make_solitonic(values["q"], values.get("kappa") or 0.0)
    if family == "exponential":
        return make_exponential(values["p"])
    if family == "morse":
        return make_morse(values["p"], values["mu"])
    return make_custom(block.expr_a or "", block.expr_b)


def to_profile(block: ProfileBlock, overrides: dict[str, float] | None = None) -> Profile:
    """Build the profile of a config block.

    Args:
        block (ProfileBlock): Validated profile block.
        overrides (dict[str, float] | None): Parameter values replacing those of the
            block, used by sweeps.

    Returns:
        Profile: The profile.
    """
    values = {"q": block.q, "kappa": block.kappa, "p": block.p, "mu": block.mu}
    values.update(overrides or {})
    if block.family == "canonical-from-g":
        generator = _family_profile(block.generator or "", block, values)
        return canonical_b_from_g(generator, values["mu"])
    return _family_profile(block.family, block, values)


def to_params(config: RunConfig, overrides: dict[str, float] | None = None) -> ModelParams:
    """Build the Swanson parameters, applying model-key overrides."""
    values = config.model.model_dump()
    values.update({key: value for key, value in (overrides or {}).items() if key in MODEL_KEYS})
    return ModelParams(**values)


def to_grid(config: RunConfig, profile: Profile, params: ModelParams) -> Grid:
    """Build the grid, with the clipped family default domain when none is configured."""
    return default_grid(profile, config.grid.n, config.grid.x_min, config.grid.x_max, params)


def to_job(
    config: RunConfig,
    overrides: dict[str, float] | None = None,
) -> tuple[Profile, ModelParams, Grid]:
    """Profile, parameters and grid of a run, optionally at an overridden parameter value."""
    profile_overrides = {
        key: value for key, value in (overrides or {}).items() if key not in MODEL_KEYS
    }
    profile = to_profile(config.profile, profile_overrides)
    params = to_params(config, overrides)
    return profile, params, to_grid(config, profile, params)
