"""Test session setup: environment first, so settings and the logger pick it up on import."""

import os
import tempfile
from pathlib import Path

os.environ.setdefault("SWANSON_ENVIRONMENT", "PYTEST")
os.environ.setdefault(
    "SWANSON_APP_LOG_FILE_PATH",
    str(Path(tempfile.gettempdir()) / "swanson-tests" / "swanson.log"),
)
os.environ.setdefault("SWANSON_LOG_LEVEL", "WARNING")

import pytest  # noqa: E402

from src.domain.model import ModelParams  # noqa: E402
from src.domain.profiles import (  # noqa: E402
    CanonicalProfile,
    HarmonicProfile,
    SolitonicProfile,
    make_harmonic,
    make_morse,
    make_solitonic,
)


@pytest.fixture
def harmonic() -> HarmonicProfile:
    return make_harmonic()


@pytest.fixture
def solitonic() -> SolitonicProfile:
    return make_solitonic(1.0, 2.0)


@pytest.fixture
def morse() -> CanonicalProfile:
    return make_morse(1.0, 0.0)


@pytest.fixture
def jones_params() -> ModelParams:
    """omega = 2, alpha = 0.4, beta = 0.2, so omega~ = 1.4."""
    return ModelParams(omega=2.0, alpha=0.4, beta=0.2)


@pytest.fixture
def solitonic_params() -> ModelParams:
    """alpha = 0.1, beta = 0 at unit omega~."""
    return ModelParams(omega=1.1, alpha=0.1, beta=0.0)


@pytest.fixture
def write_config(tmp_path: Path):  # noqa: ANN201
    """Write a run configuration file and return its path."""

    def write(text: str, name: str = "run.cfg") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
