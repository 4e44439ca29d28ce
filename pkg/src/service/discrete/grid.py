"""Uniform grids with Dirichlet boundaries at x_min and x_max."""

import math
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.config import settings
from src.core.logger import logger
from src.domain.model import ModelParams, rho_tilde
from src.domain.profiles import FloatArray, Profile
from src.service.exceptions import GridError

MIN_INTERIOR_NODES = 16


class Grid(BaseModel):
    """Uniform grid of interior nodes x_i = x_min + (i + 1) h, i = 0..n-1.

    Attributes:
        x_min (float): Left boundary, where u = 0.
        x_max (float): Right boundary, where u = 0.
        n_interior (int): Number of interior nodes.
        clipped (bool): Whether the domain was shrunk to keep the kinetic
            coefficient bounded.
    """

    model_config = ConfigDict(frozen=True)

    x_min: float = Field(examples=[-10.0])
    x_max: float = Field(examples=[10.0])
    n_interior: int = Field(examples=[2000])
    clipped: bool = False

    @model_validator(mode="after")
    def check_layout(self: "Grid") -> "Grid":
        """Validates the node count and the orientation of the domain.

        Raises:
            GridError: If the grid has fewer than 16 nodes or x_min >= x_max.

        Returns:
            Grid: The validated grid.
        """
        if self.n_interior < MIN_INTERIOR_NODES:
            error_message = (
                f"Grid needs at least {MIN_INTERIOR_NODES} interior nodes, got {self.n_interior}."
            )
            raise GridError(error_message)
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            error_message = "Grid boundaries must be finite."
            raise GridError(error_message)
        if self.x_min >= self.x_max:
            error_message = f"Grid needs x_min < x_max, got [{self.x_min}, {self.x_max}]."
            raise GridError(error_message)
        return self

    @property
    def h(self: "Grid") -> float:
        """Node spacing (x_max - x_min)/(n_interior + 1)."""
        return (self.x_max - self.x_min) / (self.n_interior + 1)

    @property
    def nodes(self: "Grid") -> FloatArray:
        """Interior node positions."""
        return self.x_min + self.h * np.arange(1, self.n_interior + 1, dtype=np.float64)

    @property
    def midpoints(self: "Grid") -> FloatArray:
        """The n + 1 cell midpoints x_min + (j + 1/2) h, j = 0..n."""
        return self.x_min + self.h * (np.arange(self.n_interior + 1, dtype=np.float64) + 0.5)

    @property
    def is_symmetric(self: "Grid") -> bool:
        """True when the domain is symmetric about the origin."""
        return self.x_min == -self.x_max

    def describe(self: "Grid") -> dict[str, float | int | bool]:
        """Grid descriptor for reports."""
        return {**self.model_dump(), "h": self.h}


def refine(grid: Grid) -> Grid:
    """Halve the spacing on the same domain; old nodes stay nodes (n' = 2n + 1)."""
    return grid.model_copy(update={"n_interior": 2 * grid.n_interior + 1})


def clip_domain(
    inside: Callable[[FloatArray], npt.NDArray[np.bool_]],
    x_min: float,
    x_max: float,
    samples: int = 4097,
) -> tuple[float, float]:
    """Shrink [x_min, x_max] to the interval around 0 on which `inside` holds.

    Args:
        inside (Callable): Vectorized predicate on sample points.
        x_min (float): Left boundary.
        x_max (float): Right boundary.
        samples (int): Resolution of the scan on each side.

    Raises:
        GridError: If the predicate fails at the origin already.

    Returns:
        tuple[float, float]: The clipped boundaries.
    """
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        if not bool(inside(np.zeros(1))[0]):
            error_message = "Domain clipping condition fails at the origin."
            raise GridError(error_message)
        right = np.linspace(0.0, x_max, samples) if x_max > 0 else np.array([0.0])
        left = np.linspace(0.0, x_min, samples) if x_min < 0 else np.array([0.0])
        bounds = []
        for side in (left, right):
            first_bad = np.flatnonzero(~inside(side))
            bounds.append(side[-1] if first_bad.size == 0 else side[first_bad[0] - 1])
    return float(bounds[0]), float(bounds[1])


def _kinetic_inside(profile: Profile) -> Callable[[FloatArray], npt.NDArray[np.bool_]]:
    def inside(x: FloatArray) -> npt.NDArray[np.bool_]:
        return profile.a(x) ** 2 <= settings.MORSE_KINETIC_CLIP

    return inside


def _metric_inside(
    profile: Profile,
    params: ModelParams,
) -> Callable[[FloatArray], npt.NDArray[np.bool_]]:
    limit = math.sqrt(settings.RANGE_LIMIT)

    def inside(x: FloatArray) -> npt.NDArray[np.bool_]:
        rho = rho_tilde(profile, params, x)
        return np.isfinite(rho) & (rho <= limit) & (rho >= 1.0 / limit)

    return inside


def default_grid(
    profile: Profile,
    n_interior: int,
    x_min: float | None = None,
    x_max: float | None = None,
    params: ModelParams | None = None,
) -> Grid:
    """Grid on [-H/q', H/q'] unless boundaries are given.

    H is DOMAIN_HALF_WIDTH and q' the profile length scale. Without explicit
    boundaries the Morse-like family is clipped so that a^2 <= MORSE_KINETIC_CLIP,
    and with `params` every family is clipped so that rho~ stays within
    [RANGE_LIMIT^-1/2, RANGE_LIMIT^1/2].

    Args:
        profile (Profile): Profile fixing the length scale.
        n_interior (int): Number of interior nodes.
        x_min (float | None): Explicit left boundary.
        x_max (float | None): Explicit right boundary.
        params (ModelParams | None): Parameters of the metric clip.

    Returns:
        Grid: The grid.
    """
    half_width = settings.DOMAIN_HALF_WIDTH / profile.length_scale
    explicit = x_min is not None and x_max is not None
    left = -half_width if x_min is None else x_min
    right = half_width if x_max is None else x_max
    conditions = []
    if not explicit and profile.family in {"morse", "exponential"}:
        conditions.append(_kinetic_inside(profile))
    if not explicit and params is not None and not params.is_balanced:
        conditions.append(_metric_inside(profile, params))
    clipped = False
    for inside in conditions:
        clipped_left, clipped_right = clip_domain(inside, left, right)
        clipped = clipped or (clipped_left, clipped_right) != (left, right)
        left, right = clipped_left, clipped_right
    if clipped:
        logger.info("Clipped %s domain to [%.6g, %.6g]", profile.family, left, right)
    grid = Grid(x_min=left, x_max=right, n_interior=n_interior, clipped=clipped)
    logger.debug("Grid [%.6g, %.6g], n=%d, h=%.6g", left, right, n_interior, grid.h)
    return grid


def normalize_samples(values: FloatArray, spacing: float) -> FloatArray:
    """Scale to unit discrete norm h sum v^2 = 1, largest-magnitude entry positive.

    Columns of a 2-D array are normalized independently.
    """
    values = np.asarray(values, dtype=np.float64)
    column = values.reshape(values.shape[0], -1)
    norms = np.sqrt(spacing * np.sum(column**2, axis=0))
    norms[norms == 0.0] = 1.0
    pivots = column[np.argmax(np.abs(column), axis=0), np.arange(column.shape[1])]
    signs = np.where(pivots < 0.0, -1.0, 1.0)
    return (column * (signs / norms)).reshape(values.shape)
