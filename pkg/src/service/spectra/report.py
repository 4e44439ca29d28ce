"""Spectral report: h~ eigenpairs, the H~ oracle and closed-form comparisons."""

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.core.config import settings
from src.core.logger import logger
from src.domain.closedform import closed_form_energy, closed_form_wavefunction, factorize
from src.domain.exceptions import BaseExceptionError as DomainError
from src.domain.exceptions import NotFactorizableError
from src.domain.model import ModelParams, rho_tilde
from src.domain.profiles import FloatArray, Profile
from src.service.discrete.grid import Grid, normalize_samples
from src.service.discrete.operators import build_h_tilde, build_H_tilde
from src.service.discrete.residuals import (
    ResidualRecord,
    gaussian_test_vectors,
    residual_commutator,
    residual_factorization,
    residual_pseudo_hermiticity,
    residual_similarity,
)
from src.service.spectra.solvers import eig_dense_nonsymmetric, eig_symmetric_tridiagonal


class LevelComparison(BaseModel):
    """One row of `spectrum.csv`."""

    model_config = ConfigDict(frozen=True)

    n: int
    e_numeric: float
    e_closed_form: float | None = None
    abs_err: float | None = None
    rel_err: float | None = None
    max_im: float | None = None
    overlap: float | None = None


class SpectralReport(BaseModel):
    """Everything computed for one (profile, params, grid, k) job.

    Attributes:
        family (str): Profile family.
        params (ModelParams): Swanson parameters.
        grid (Grid): Grid of the production solve.
        energies (np.ndarray): Lowest k eigenvalues of h~, ascending.
        chi (np.ndarray): Eigenvectors of h~ as columns, h sum chi^2 = 1.
        phi (np.ndarray): Transported eigenvectors phi = chi / rho~ of H~.
        phi_overflow (bool): Whether phi left the representable range.
        eigenpair_residuals (np.ndarray): ||h~ chi - E chi|| / ||chi|| per level.
        residual_bound (float): 1e-8 ||h~||_inf.
        transport_residuals (np.ndarray): ||H~ phi - E phi|| / ||phi|| per level.
        orthogonality (np.ndarray): Gram matrix h chi^T chi.
        clusters (list[tuple[int, int]]): Flagged near-degenerate index pairs.
        sturm_confirmed (bool): Sturm count confirms the levels are the lowest k.
        oracle_grid (Grid | None): Grid of the nonsymmetric oracle solve.
        oracle_eigenvalues (np.ndarray | None): Full H~ spectrum, sorted by real part.
        oracle_norm_inf (float | None): ||H~||_inf on the oracle grid.
        max_im (float | None): max |Im E| of the oracle spectrum.
        levels (list[LevelComparison]): Per-level comparison with closed forms.
        residuals (list[ResidualRecord]): Operator identity residuals on `grid`.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: str
    params: ModelParams
    grid: Grid
    energies: np.ndarray
    chi: np.ndarray
    phi: np.ndarray
    phi_overflow: bool
    eigenpair_residuals: np.ndarray
    residual_bound: float
    transport_residuals: np.ndarray
    orthogonality: np.ndarray
    clusters: list[tuple[int, int]]
    sturm_confirmed: bool
    oracle_grid: Grid | None = None
    oracle_eigenvalues: np.ndarray | None = None
    oracle_norm_inf: float | None = None
    max_im: float | None = None
    levels: list[LevelComparison]
    residuals: list[ResidualRecord]

    @property
    def reality_ok(self: "SpectralReport") -> bool | None:
        """max |Im E| <= REALITY_TOL ||H~||_inf, None without oracle."""
        if self.max_im is None or self.oracle_norm_inf is None:
            return None
        return self.max_im <= settings.REALITY_TOL * self.oracle_norm_inf

    def isospectral_gap(self: "SpectralReport", levels: int = 5) -> float | None:
        """Largest relative gap between oracle real parts and h~ levels on the same grid."""
        if self.oracle_eigenvalues is None or self.oracle_grid != self.grid:
            return None
        count = min(levels, self.energies.size, self.oracle_eigenvalues.size)
        real_parts = np.sort(self.oracle_eigenvalues.real)[:count]
        reference = self.energies[:count]
        scale = np.maximum(1.0, np.abs(reference))
        return float(np.max(np.abs(real_parts - reference) / scale))


def _oracle(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    *,
    force: bool,
) -> tuple[Grid | None, np.ndarray | None, float | None]:
    if grid.n_interior <= settings.MAX_DENSE_DIM:
        oracle_grid = grid
    elif force:
        oracle_grid = grid.model_copy(update={"n_interior": settings.ORACLE_GRID_NODES})
        logger.info(
            "Oracle solve on a coarser grid with %d nodes", settings.ORACLE_GRID_NODES
        )
    else:
        return None, None, None
    big_h_tilde = build_H_tilde(profile, params, oracle_grid)
    values = eig_dense_nonsymmetric(big_h_tilde)
    return oracle_grid, values, big_h_tilde.norm_inf()


def _identity_residuals(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
) -> list[ResidualRecord]:
    vectors = gaussian_test_vectors(grid)
    records = [
        ResidualRecord(
            name="similarity",
            h=grid.h,
            residual=residual_similarity(profile, params, grid, vectors),
        ),
        ResidualRecord(
            name="pseudo_hermiticity",
            h=grid.h,
            residual=residual_pseudo_hermiticity(profile, params, grid, vectors),
        ),
        ResidualRecord(
            name="commutator",
            h=grid.h,
            residual=residual_commutator(profile, grid, vectors),
        ),
    ]
    try:
        factorization = residual_factorization(profile, params, grid, vectors)
    except NotFactorizableError:
        logger.debug("Factorization residual skipped: alpha and beta both nonzero")
    else:
        records.append(ResidualRecord(name="factorization", h=grid.h, residual=factorization))
    return records


def _compare_levels(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    energies: FloatArray,
    chi: FloatArray,
    oracle_values: np.ndarray | None,
) -> list[LevelComparison]:
    levels = []
    for n, energy in enumerate(energies):
        row: dict[str, float | int | None] = {"n": n, "e_numeric": float(energy)}
        if oracle_values is not None and n < oracle_values.size:
            row["max_im"] = float(abs(oracle_values[n].imag))
        try:
            expected = closed_form_energy(profile, params, n)
            analytic = closed_form_wavefunction(profile, params, n, grid.nodes)
        except DomainError as error:
            logger.warning("Closed form not applicable to level %d: %s", n, error)
            expected, analytic = None, None
        if expected is not None:
            row["e_closed_form"] = expected
            row["abs_err"] = abs(float(energy) - expected)
            row["rel_err"] = row["abs_err"] / max(abs(expected), np.finfo(np.float64).tiny)
        if analytic is not None:
            analytic = normalize_samples(analytic, grid.h)
            row["overlap"] = float(abs(grid.h * np.dot(chi[:, n], analytic)))
        levels.append(LevelComparison(**row))
    return levels


def make_report(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    k: int,
    *,
    oracle: bool = False,
) -> SpectralReport:
    """Solve h~ for its lowest k levels and compare against every available reference.

    The nonsymmetric H~ oracle runs on `grid` when its dimension is at most
    MAX_DENSE_DIM, and on a coarser grid of ORACLE_GRID_NODES nodes when `oracle`
    forces it for a larger grid.

    Args:
        profile (Profile): Ladder-operator profile.
        params (ModelParams): Swanson parameters.
        grid (Grid): Grid of the production solve.
        k (int): Number of levels.
        oracle (bool): Force the nonsymmetric solve.

    Returns:
        SpectralReport: The report.
    """
    h_tilde = build_h_tilde(profile, params, grid)
    pairs = eig_symmetric_tridiagonal(h_tilde, k)
    energies, chi = pairs.values, pairs.vectors

    rho = rho_tilde(profile, params, grid.nodes)[:, np.newaxis]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        phi = chi / rho
    phi_overflow = bool(
        not np.all(np.isfinite(phi)) or np.max(np.abs(phi)) > settings.RANGE_LIMIT
    )
    if phi_overflow:
        logger.warning("phi = chi / rho~ overflows on the grid; transport residuals are skipped")
        transport = np.full(k, np.nan)
    else:
        big_h_tilde = build_H_tilde(profile, params, grid)
        transport = np.linalg.norm(big_h_tilde.apply(phi) - phi * energies, axis=0) / (
            np.linalg.norm(phi, axis=0)
        )

    oracle_grid, oracle_values, oracle_norm = _oracle(profile, params, grid, force=oracle)
    max_im = None if oracle_values is None else float(np.max(np.abs(oracle_values.imag)))

    report = SpectralReport(
        family=profile.family,
        params=params,
        grid=grid,
        energies=energies,
        chi=chi,
        phi=phi,
        phi_overflow=phi_overflow,
        eigenpair_residuals=pairs.residuals,
        residual_bound=pairs.residual_bound,
        transport_residuals=transport,
        orthogonality=grid.h * (chi.T @ chi),
        clusters=pairs.clusters,
        sturm_confirmed=pairs.sturm_confirmed,
        oracle_grid=oracle_grid,
        oracle_eigenvalues=oracle_values,
        oracle_norm_inf=oracle_norm,
        max_im=max_im,
        levels=_compare_levels(profile, params, grid, energies, chi, oracle_values),
        residuals=_identity_residuals(profile, params, grid),
    )
    logger.info(
        "Spectral report for %s: E0 = %.12g, max|Im| = %s", profile.family, energies[0], max_im
    )
    return report
