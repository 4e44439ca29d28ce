"""Application service: one static method per job, writing through an `ArtifactStore`."""

import hashlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from src.controller.cli.schemas.run_config import RunConfig, sweep_values
from src.core.config import settings
from src.core.logger import logger
from src.domain.closedform import closed_form_energy, closed_form_wavefunction, solitonic_delta
from src.domain.exceptions import BaseExceptionError as DomainError
from src.domain.model import ModelParams, sample_coefficients, sample_metric
from src.domain.profiles import Profile, SolitonicProfile
from src.repository.artifacts import ArtifactStore
from src.repository.exceptions import BaseExceptionError as RepositoryError
from src.service.discrete.grid import Grid, normalize_samples
from src.service.discrete.operators import build_h_tilde, build_H_tilde
from src.service.exceptions import BaseExceptionError as ServiceError
from src.service.exceptions import JobServiceError
from src.service.jobs.mapper import to_job
from src.service.jobs.verification import VerificationReport, run_verification
from src.service.spectra.report import SpectralReport, make_report
from src.service.spectra.solvers import eig_dense_nonsymmetric, eig_symmetric_tridiagonal

KNOWN_ERRORS = (DomainError, ServiceError, RepositoryError)
SPECTRUM_COLUMNS = ["n", "E_numeric", "E_closed_form", "abs_err", "rel_err", "max_im"]
SWEEP_COLUMNS = ["value", "E0", "max_im", "delta", "lambda"]


def coefficients_frame(profile: Profile, params: ModelParams, grid: Grid) -> pd.DataFrame:
    """Table of `coefficients.csv`."""
    field = sample_coefficients(profile, params, grid.nodes)
    return pd.DataFrame(
        {
            "x": field.x,
            "a": field.a,
            "b": field.b,
            "c1": field.c1,
            "c2": field.c2,
            "veff": field.veff,
            "rho_tilde": field.rho_tilde,
            "zeta_plus": field.zeta_plus,
        }
    )


def metric_frame(profile: Profile, params: ModelParams, grid: Grid) -> pd.DataFrame:
    """Table of `metric.csv`; the jones_rho column only for the harmonic family."""
    metric = sample_metric(profile, params, grid.nodes)
    columns = {
        "x": metric.x,
        "mass": metric.mass,
        "w": metric.w,
        "rho_tilde": metric.rho_tilde,
        "zeta_plus": metric.zeta_plus,
        "zeta": metric.zeta,
    }
    if metric.jones_rho is not None:
        columns["jones_rho"] = metric.jones_rho
    return pd.DataFrame(columns)


def spectrum_frame(report: SpectralReport) -> pd.DataFrame:
    """Table of `spectrum.csv`."""
    rows = [
        {
            "n": level.n,
            "E_numeric": level.e_numeric,
            "E_closed_form": level.e_closed_form,
            "abs_err": level.abs_err,
            "rel_err": level.rel_err,
            "max_im": level.max_im,
        }
        for level in report.levels
    ]
    return pd.DataFrame(rows, columns=SPECTRUM_COLUMNS)


def wavefunctions_frame(report: SpectralReport) -> pd.DataFrame:
    """Table of `wavefunctions.csv`: x, chi_0..chi_(k-1), phi_0..phi_(k-1)."""
    columns: dict[str, np.ndarray] = {"x": report.grid.nodes}
    for index in range(report.chi.shape[1]):
        columns[f"chi_{index}"] = report.chi[:, index]
    for index in range(report.phi.shape[1]):
        columns[f"phi_{index}"] = report.phi[:, index]
    return pd.DataFrame(columns)


def closed_form_frame(profile: Profile, params: ModelParams, grid: Grid, k: int) -> pd.DataFrame:
    """Table of `closedform.csv`: n, E_n and a SHA-256 of the normalized chi_n samples.

    Empty for families without closed forms.
    """
    rows = []
    for n in range(k):
        try:
            energy = closed_form_energy(profile, params, n)
            chi = closed_form_wavefunction(profile, params, n, grid.nodes)
        except DomainError as error:
            logger.warning("No closed form for level %d: %s", n, error)
            break
        if energy is None or chi is None:
            break
        samples = np.ascontiguousarray(normalize_samples(chi, grid.h), dtype="<f8")
        rows.append(
            {"n": n, "E_n": energy, "chi_sha256": hashlib.sha256(samples.tobytes()).hexdigest()}
        )
    return pd.DataFrame(rows, columns=["n", "E_n", "chi_sha256"])


def _sweep_point(config: RunConfig, parameter: str, value: float) -> dict[str, float]:
    """E0, max |Im E|, Delta and lambda at one sweep value."""
    profile, params, grid = to_job(config, {parameter: value})
    energy = eig_symmetric_tridiagonal(build_h_tilde(profile, params, grid), 1).values[0]
    oracle_grid = grid
    if grid.n_interior > settings.MAX_DENSE_DIM:
        oracle_grid = grid.model_copy(update={"n_interior": settings.ORACLE_GRID_NODES})
    oracle = eig_dense_nonsymmetric(build_H_tilde(profile, params, oracle_grid))
    delta, lam = float("nan"), float("nan")
    if isinstance(profile, SolitonicProfile):
        delta = solitonic_delta(profile.kappa, params.alpha, params.beta, params.omega_tilde)
        if delta > 0:
            lam = 0.5 + float(np.sqrt(delta))
    return {
        "value": value,
        "E0": float(energy),
        "max_im": float(np.max(np.abs(oracle.imag))),
        "delta": delta,
        "lambda": lam,
    }


class JobApplicationService:
    """Defines the application service for the computational jobs."""

    @staticmethod
    def run_veff(config: RunConfig, store: ArtifactStore) -> None:
        """Sample c1, c2, V_eff and the metric and write `coefficients.csv`.

        Args:
            config (RunConfig): Validated run configuration.
            store (ArtifactStore): Output writer.

        Raises:
            JobServiceError: If an unexpected error occurs.
        """
        try:
            profile, params, grid = to_job(config)
            store.write_csv("coefficients.csv", coefficients_frame(profile, params, grid))
        except KNOWN_ERRORS:
            raise
        except Exception as error:
            raise JobServiceError(str(error)) from error

    @staticmethod
    def run_metric(config: RunConfig, store: ArtifactStore) -> None:
        """Sample w, rho~, zeta+ and zeta and write `metric.csv` and `coefficients.csv`.

        Raises:
            JobServiceError: If an unexpected error occurs.
        """
        try:
            profile, params, grid = to_job(config)
            store.write_csv("coefficients.csv", coefficients_frame(profile, params, grid))
            store.write_csv("metric.csv", metric_frame(profile, params, grid))
        except KNOWN_ERRORS:
            raise
        except Exception as error:
            raise JobServiceError(str(error)) from error

    @staticmethod
    def run_spectrum(
        config: RunConfig,
        store: ArtifactStore,
        *,
        oracle: bool = False,
        dump_matrix: bool = False,
    ) -> SpectralReport:
        """Solve for the lowest k levels and write the spectral tables.

        Args:
            config (RunConfig): Validated run configuration.
            store (ArtifactStore): Output writer.
            oracle (bool): Force the nonsymmetric H~ solve.
            dump_matrix (bool): Also write the h~ and H~ triplet files.

        Raises:
            JobServiceError: If an unexpected error occurs.

        Returns:
            SpectralReport: The spectral report.
        """
        try:
            profile, params, grid = to_job(config)
            k = config.k or 1
            report = make_report(profile, params, grid, k, oracle=oracle)
            store.write_csv("spectrum.csv", spectrum_frame(report))
            store.write_csv("wavefunctions.csv", wavefunctions_frame(report))
            store.write_csv("closedform.csv", closed_form_frame(profile, params, grid, k))
            if dump_matrix:
                JobApplicationService.dump_matrices(profile, params, grid, store)
        except KNOWN_ERRORS:
            raise
        except Exception as error:
            raise JobServiceError(str(error)) from error
        else:
            return report

    @staticmethod
    def run_verify(
        config: RunConfig,
        store: ArtifactStore,
        *,
        dump_matrix: bool = False,
    ) -> VerificationReport:
        """Run the identity suite and write `verify.json` plus the spectral tables.

        Raises:
            JobServiceError: If an unexpected error occurs.

        Returns:
            VerificationReport: The verification record; the caller decides the exit status.
        """
        try:
            profile, params, grid = to_job(config)
            k = config.k or 1
            verification, report = run_verification(profile, params, grid, k)
            store.write_json("verify.json", verification)
            store.write_csv("spectrum.csv", spectrum_frame(report))
            store.write_csv("closedform.csv", closed_form_frame(profile, params, grid, k))
            if dump_matrix:
                JobApplicationService.dump_matrices(profile, params, grid, store)
        except KNOWN_ERRORS:
            raise
        except Exception as error:
            raise JobServiceError(str(error)) from error
        else:
            return verification

    @staticmethod
    def run_sweep(config: RunConfig, store: ArtifactStore) -> pd.DataFrame:
        """Vary one parameter in a bounded thread pool and write `sweep.csv` once at the end.

        Raises:
            JobServiceError: If an unexpected error occurs.

        Returns:
            pd.DataFrame: The sweep table.
        """
        if config.sweep is None:
            error_message = "Sweep job without a sweep block."
            raise JobServiceError(error_message)
        parameter = config.sweep.parameter
        values = sweep_values(config.sweep)
        logger.info(
            "Sweeping %s over %d points with %d workers",
            config.sweep.parameter,
            len(values),
            settings.SWEEP_WORKERS,
        )
        try:
            with ThreadPoolExecutor(max_workers=settings.SWEEP_WORKERS) as executor:
                rows = list(
                    executor.map(
                        lambda value: _sweep_point(config, parameter, value),
                        values,
                    )
                )
            frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
            store.write_csv("sweep.csv", frame)
        except KNOWN_ERRORS:
            raise
        except Exception as error:
            raise JobServiceError(str(error)) from error
        else:
            return frame

    @staticmethod
    def dump_matrices(
        profile: Profile,
        params: ModelParams,
        grid: Grid,
        store: ArtifactStore,
    ) -> None:
        """Write `h_tilde.triplets` and `H_tilde.triplets`."""
        store.write_triplets("h_tilde.triplets", build_h_tilde(profile, params, grid))
        store.write_triplets("H_tilde.triplets", build_H_tilde(profile, params, grid))
