"""Eigensolvers: Sturm bisection for symmetric tridiagonal h~, dense QR for H~.

The symmetric path runs LAPACK stebz (Sturm-sequence bisection) followed by
stein (inverse iteration, at most 5 steps, with re-orthogonalization inside
clusters) through `scipy.linalg.eigh_tridiagonal`. The nonsymmetric oracle
reduces to Hessenberg form and runs the shifted QR algorithm of LAPACK geev.
"""

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict
from scipy.linalg import LinAlgError, eigh_tridiagonal, eigvals, hessenberg

from src.core.config import settings
from src.core.logger import logger
from src.domain.profiles import FloatArray
from src.service.discrete.grid import normalize_samples
from src.service.discrete.operators import OperatorMatrix
from src.service.exceptions import (
    DimensionTooLargeError,
    EigenRangeError,
    MatrixStructureError,
    NonConvergenceError,
)

MatrixLike = OperatorMatrix | npt.NDArray[np.float64]


class EigenPairs(BaseModel):
    """Lowest eigenpairs of a symmetric tridiagonal matrix.

    Attributes:
        values (np.ndarray): Eigenvalues, ascending.
        vectors (np.ndarray): Eigenvectors as columns, normalized to h sum v^2 = 1
            with the largest-magnitude entry positive.
        residuals (np.ndarray): ||A v - E v||_2 / ||v||_2 per pair.
        residual_bound (float): Accepted residual, tol ||A||_inf.
        clusters (list[tuple[int, int]]): Index pairs closer than the cluster tolerance.
        sturm_confirmed (bool): Whether the Sturm count confirms these are the lowest levels.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    residual_bound: float
    clusters: list[tuple[int, int]]
    sturm_confirmed: bool

    @property
    def residuals_ok(self: "EigenPairs") -> bool:
        """True when every pair satisfies the residual bound."""
        return bool(np.all(self.residuals <= self.residual_bound))


def _symmetric_bands(matrix: MatrixLike) -> tuple[FloatArray, FloatArray, float]:
    """Diagonal, off-diagonal and grid spacing of a symmetric tridiagonal matrix."""
    if isinstance(matrix, OperatorMatrix):
        if not matrix.is_symmetric:
            error_message = f"Operator {matrix.tag} is not symmetric."
            raise MatrixStructureError(error_message)
        return matrix.main, matrix.upper, matrix.grid.h
    dense = np.asarray(matrix, dtype=np.float64)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:  # noqa: PLR2004
        error_message = f"Expected a square matrix, got shape {dense.shape}."
        raise MatrixStructureError(error_message)
    if not np.array_equal(dense, dense.T) or np.any(np.triu(dense, 2)):
        error_message = "Matrix is not symmetric tridiagonal."
        raise MatrixStructureError(error_message)
    return np.diag(dense).copy(), np.diag(dense, 1).copy(), 1.0


def _norm_inf(diagonal: FloatArray, off_diagonal: FloatArray) -> float:
    row_sums = np.abs(diagonal).copy()
    row_sums[:-1] += np.abs(off_diagonal)
    row_sums[1:] += np.abs(off_diagonal)
    return float(row_sums.max())


def sturm_count(matrix: MatrixLike, shift: float) -> int:
    """Number of eigenvalues strictly below `shift`.

    Counts the negative pivots of the LDL^T factorization of A - shift I.

    Args:
        matrix (MatrixLike): Symmetric tridiagonal matrix.
        shift (float): The shift.

    Returns:
        int: The Sturm count.
    """
    diagonal, off_diagonal, _ = _symmetric_bands(matrix)
    return _sturm_count_bands(diagonal, off_diagonal, shift)


def _sturm_count_bands(diagonal: FloatArray, off_diagonal: FloatArray, shift: float) -> int:
    squared = off_diagonal**2
    guard = np.finfo(np.float64).eps * max(_norm_inf(diagonal, off_diagonal), 1.0)
    count = 0
    pivot = diagonal[0] - shift
    for index in range(diagonal.size):
        if index > 0:
            pivot = diagonal[index] - shift - squared[index - 1] / pivot
        if pivot == 0.0:
            pivot = guard
        if pivot < 0.0:
            count += 1
    return count


def eig_symmetric_tridiagonal(matrix: MatrixLike, k: int) -> EigenPairs:
    """Lowest k eigenpairs by Sturm bisection and inverse iteration.

    Args:
        matrix (MatrixLike): Symmetric tridiagonal matrix, usually h~.
        k (int): Number of levels, 1 <= k <= dimension.

    Raises:
        EigenRangeError: If k is out of range.
        NonConvergenceError: If bisection or inverse iteration fails.

    Returns:
        EigenPairs: The eigenpairs.
    """
    diagonal, off_diagonal, spacing = _symmetric_bands(matrix)
    dimension = diagonal.size
    if not 1 <= k <= dimension:
        error_message = f"Requested k={k} eigenpairs of a {dimension}x{dimension} matrix."
        raise EigenRangeError(error_message)

    norm = _norm_inf(diagonal, off_diagonal)
    # Relative to the bottom of the spectrum; LAPACK floors it at ulp ||A||.
    radii = np.zeros_like(diagonal)
    radii[:-1] += np.abs(off_diagonal)
    radii[1:] += np.abs(off_diagonal)
    tolerance = settings.BISECTION_RTOL * max(abs(float(np.min(diagonal - radii))), 1.0)
    try:
        values, vectors = eigh_tridiagonal(
            diagonal,
            off_diagonal,
            select="i",
            select_range=(0, k - 1),
            lapack_driver="stebz",
            tol=tolerance,
        )
    except LinAlgError as error:
        error_message = f"Symmetric tridiagonal eigensolver did not converge: {error}"
        raise NonConvergenceError(error_message) from error

    vectors = normalize_samples(vectors, spacing)
    product = _tridiagonal_apply(diagonal, off_diagonal, vectors)
    residuals = np.linalg.norm(product - vectors * values, axis=0) / np.linalg.norm(
        vectors, axis=0
    )
    bound = settings.EIGENPAIR_RESIDUAL_TOL * norm
    if np.any(residuals > bound):
        logger.warning(
            "Eigenpair residual %.3e exceeds %.3e", float(residuals.max()), bound
        )

    scale = np.maximum(1.0, np.abs(values))
    gaps = np.diff(values)
    clusters = [
        (int(index), int(index) + 1)
        for index in np.flatnonzero(gaps <= settings.CLUSTER_TOL * scale[1:])
    ]
    if clusters:
        logger.warning("Clustered eigenvalues at index pairs %s", clusters)

    shift = values[-1] + max(abs(values[-1]), 1.0) * 1e-9
    if k < dimension:
        shift = min(shift, 0.5 * (values[-1] + _next_level(diagonal, off_diagonal, k)))
    confirmed = _sturm_count_bands(diagonal, off_diagonal, shift) == k
    logger.debug("Solved %d lowest levels of dimension %d", k, dimension)
    return EigenPairs(
        values=values,
        vectors=vectors,
        residuals=residuals,
        residual_bound=bound,
        clusters=clusters,
        sturm_confirmed=confirmed,
    )


def _tridiagonal_apply(
    diagonal: FloatArray,
    off_diagonal: FloatArray,
    vectors: FloatArray,
) -> FloatArray:
    product = diagonal[:, np.newaxis] * vectors
    product[:-1] += off_diagonal[:, np.newaxis] * vectors[1:]
    product[1:] += off_diagonal[:, np.newaxis] * vectors[:-1]
    return product


def _next_level(diagonal: FloatArray, off_diagonal: FloatArray, k: int) -> float:
    value = eigh_tridiagonal(
        diagonal,
        off_diagonal,
        eigvals_only=True,
        select="i",
        select_range=(k, k),
        lapack_driver="stebz",
    )
    return float(value[0])


def eig_dense_nonsymmetric(
    matrix: MatrixLike,
    max_dim: int | None = None,
) -> npt.NDArray[np.complex128]:
    """All eigenvalues of a general real matrix, sorted by real part.

    Args:
        matrix (MatrixLike): Operator or dense square matrix, usually H~.
        max_dim (int | None): Dimension limit, MAX_DENSE_DIM by default.

    Raises:
        DimensionTooLargeError: If the matrix is larger than the limit.
        NonConvergenceError: If the QR iteration fails.

    Returns:
        npt.NDArray[np.complex128]: The eigenvalues.
    """
    limit = settings.MAX_DENSE_DIM if max_dim is None else max_dim
    dense = matrix.dense() if isinstance(matrix, OperatorMatrix) else np.asarray(matrix, float)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:  # noqa: PLR2004
        error_message = f"Expected a square matrix, got shape {dense.shape}."
        raise MatrixStructureError(error_message)
    if dense.shape[0] > limit:
        error_message = f"Dense solve of dimension {dense.shape[0]} exceeds the limit {limit}."
        raise DimensionTooLargeError(error_message)
    try:
        reduced = hessenberg(dense)
        values = eigvals(reduced, overwrite_a=True)
    except LinAlgError as error:
        error_message = f"Shifted QR iteration did not converge: {error}"
        raise NonConvergenceError(error_message) from error
    order = np.lexsort((values.imag, values.real))
    logger.debug("Dense nonsymmetric solve of dimension %d", dense.shape[0])
    return values[order].astype(np.complex128)
