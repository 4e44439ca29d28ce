"""File with environment variables and general configuration logic.

`ENVIRONMENT`, `APP_LOG_FILE_PATH` etc. map to env variables with the same names,
prefixed with `SWANSON_`.

Pydantic priority ordering:

1. (Most important, will overwrite everything) - environment variables
2. `.env` file in root folder of project
3. Default values

The run configuration of a single computation (profile, model, grid, job) is not
read from here; it lives in the `section.key = value` file parsed by
`src.controller.cli.schemas.run_config`.

See https://docs.pydantic.dev/latest/concepts/pydantic_settings/
"""

import pathlib
from typing import Literal

from dotenv import load_dotenv
from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.core.logger import logger

IS_ENV_FOUND = load_dotenv(dotenv_path=pathlib.Path(__file__).parent.parent / ".env")
logger.debug("Environment file found: %s", IS_ENV_FOUND)


class Settings(BaseSettings):
    """Represents the configuration settings for the application."""

    model_config = SettingsConfigDict(
        env_prefix="SWANSON_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # CORE SETTINGS
    ENVIRONMENT: Literal["DEV", "PYTEST", "PREPROD", "PROD"] = "DEV"
    APP_LOG_FILE_PATH: str = "logs/swanson.log"
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    # OUTPUT
    ## 17 significant digits round-trip every double exactly
    OUTPUT_SIGNIFICANT_DIGITS: int = Field(default=17, ge=1, le=17)
    DEFAULT_OUTPUT_DIR: str = "out"

    # NUMERICS
    MAX_DENSE_DIM: int = Field(default=400, ge=2)
    ORACLE_GRID_NODES: int = Field(default=200, ge=16)
    BISECTION_RTOL: float = Field(default=1e-12, gt=0)
    EIGENPAIR_RESIDUAL_TOL: float = Field(default=1e-8, gt=0)
    CLUSTER_TOL: float = Field(default=1e-10, gt=0)
    RANGE_LIMIT: float = Field(default=1e12, gt=0)
    PARITY_TOL: float = Field(default=1e-10, gt=0)
    FACTORIZATION_ZERO_TOL: float = Field(default=1e-14, ge=0)
    DOMAIN_HALF_WIDTH: float = Field(default=12.0, gt=0)
    MORSE_KINETIC_CLIP: float = Field(default=1e6, gt=1)
    GEGENBAUER_MAX_DEGREE: int = Field(default=64, ge=0)
    QUAD_EPSABS: float = Field(default=1e-13, gt=0)
    QUAD_EPSREL: float = Field(default=1e-12, gt=0)

    # VERIFICATION
    ORDER_RATIO_MIN: float = 3.5
    ORDER_RATIO_MAX: float = 4.5
    RESIDUAL_FLOOR: float = Field(default=1e-12, gt=0)
    REALITY_TOL: float = Field(default=1e-8, gt=0)
    CLOSED_FORM_RTOL: float = Field(default=1e-3, gt=0)
    OVERLAP_TOL: float = Field(default=1e-6, gt=0)
    IDENTITY_TOL: float = Field(default=1e-10, gt=0)
    METRIC_TOL: float = Field(default=1e-11, gt=0)

    # CONCURRENCY
    SWEEP_WORKERS: int = Field(default=4, ge=1)

    @model_validator(mode="after")
    def check_order_band(self: "Settings") -> "Settings":
        """Validates that the accepted refinement-ratio band is not empty.

        Returns:
            Settings: The validated settings.

        Raises:
            ValueError: If the lower bound is not below the upper bound.
        """
        if self.ORDER_RATIO_MIN >= self.ORDER_RATIO_MAX:
            error_message = "ORDER_RATIO_MIN must be smaller than ORDER_RATIO_MAX."
            raise ValueError(error_message)
        return self


settings: Settings = Settings()
