"""Deterministic persistence of run artifacts: CSV tables, JSON reports and matrix triplets."""

import json
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src.core.config import settings
from src.core.logger import logger
from src.repository.exceptions import ArtifactWriteError

if TYPE_CHECKING:
    from src.service.discrete.operators import OperatorMatrix


class ArtifactStore:
    """Writes artifacts of one run into an output directory.

    Floats are written with OUTPUT_SIGNIFICANT_DIGITS significant digits and
    `\\n` line endings, so identical inputs give byte-identical files.
    """

    def __init__(self: "ArtifactStore", out_dir: str | Path) -> None:
        """Artifact store rooted at `out_dir`, created on first write."""
        self.out_dir = Path(out_dir)
        self.float_format = f"%.{settings.OUTPUT_SIGNIFICANT_DIGITS}g"
        self.written: list[Path] = []

    def _path(self: "ArtifactStore", name: str) -> Path:
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as error:
            error_message = f"Cannot create output directory {self.out_dir}: {error}"
            raise ArtifactWriteError(error_message) from error
        return self.out_dir / name

    def _record(self: "ArtifactStore", path: Path) -> Path:
        self.written.append(path)
        logger.info("Wrote %s", path)
        return path

    def write_csv(self: "ArtifactStore", name: str, frame: pd.DataFrame) -> Path:
        """Write a table without index.

        Args:
            name (str): File name inside the output directory.
            frame (pd.DataFrame): The table.

        Raises:
            ArtifactWriteError: If the file cannot be written.

        Returns:
            Path: The written file.
        """
        path = self._path(name)
        try:
            frame.to_csv(path, index=False, float_format=self.float_format, lineterminator="\n")
        except OSError as error:
            error_message = f"Cannot write {path}: {error}"
            raise ArtifactWriteError(error_message) from error
        return self._record(path)

    def write_json(self: "ArtifactStore", name: str, payload: BaseModel | dict) -> Path:
        """Write a pydantic model or a plain dict as indented JSON.

        Raises:
            ArtifactWriteError: If the file cannot be written.
        """
        path = self._path(name)
        data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
        try:
            path.write_text(
                json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n",
                encoding="utf-8",
            )
        except (OSError, ValueError) as error:
            error_message = f"Cannot write {path}: {error}"
            raise ArtifactWriteError(error_message) from error
        return self._record(path)

    def write_triplets(self: "ArtifactStore", name: str, operator: "OperatorMatrix") -> Path:
        """Write a tridiagonal operator as `row col value` lines in row-major order.

        Raises:
            ArtifactWriteError: If the file cannot be written.
        """
        path = self._path(name)
        rows, cols, values = operator.triplets()
        table = np.column_stack([rows, cols, values])
        try:
            np.savetxt(
                path,
                table,
                fmt=["%d", "%d", self.float_format],
                delimiter=" ",
                newline="\n",
            )
        except OSError as error:
            error_message = f"Cannot write {path}: {error}"
            raise ArtifactWriteError(error_message) from error
        return self._record(path)
