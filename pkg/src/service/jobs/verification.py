"""Identity suite of the verify job.

Discrete identities are accepted on their refinement ratio: every residual is
evaluated at h and h/2 and the ratio coarse/fine must fall in
[ORDER_RATIO_MIN, ORDER_RATIO_MAX], unless both values sit below RESIDUAL_FLOOR.
Pointwise identities and closed forms are accepted on absolute tolerances.
"""

from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.core.config import settings
from src.core.logger import logger
from src.domain.closedform import (
    closed_form_energy,
    factorize,
    morse_rho,
    morse_veff,
)
from src.domain.exceptions import BaseExceptionError as DomainError
from src.domain.exceptions import NotFactorizableError
from src.domain.model import ModelParams, rho_tilde, v_eff_general
from src.domain.profiles import CanonicalProfile, Profile, SolitonicProfile, commutator_field
from src.service.discrete.grid import Grid, refine
from src.service.discrete.operators import build_h_tilde, build_H_tilde
from src.service.discrete.residuals import (
    ResidualRecord,
    convergence,
    eta_adjoint_exact,
    residual_commutator,
    residual_eigenfunction,
    residual_factorization,
    residual_pseudo_hermiticity,
    residual_similarity,
)
from src.service.spectra.report import SpectralReport, make_report
from src.service.spectra.solvers import eig_dense_nonsymmetric, eig_symmetric_tridiagonal

EIGENFUNCTION_LEVELS = 4
ISOSPECTRAL_LEVELS = 5


class CheckResult(BaseModel):
    """Outcome of one verification check."""

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    value: float | None = None
    threshold: float | None = None
    detail: str = ""


class VerificationReport(BaseModel):
    """Everything `verify.json` records."""

    model_config = ConfigDict(frozen=True)

    family: str
    params: ModelParams
    grid: dict[str, float | int | bool]
    checks: list[CheckResult]
    residuals: list[ResidualRecord]

    @property
    def passed(self: "VerificationReport") -> bool:
        """True when every check passed."""
        return all(check.passed for check in self.checks)

    @property
    def failures(self: "VerificationReport") -> list[CheckResult]:
        """Checks that failed."""
        return [check for check in self.checks if not check.passed]

    def summary(self: "VerificationReport") -> list[str]:
        """Human-readable lines, one per check."""
        lines = []
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            value = "-" if check.value is None else f"{check.value:.6g}"
            lines.append(f"{status}  {check.name:<40} {value:>14}  {check.detail}".rstrip())
        return lines


def _finite_or_none(value: float | None) -> float | None:
    if value is None or not np.isfinite(value):
        return None
    return float(value)


def _ratio_check(name: str, coarse: float, fine: float) -> CheckResult:
    floor = settings.RESIDUAL_FLOOR
    if coarse <= floor and fine <= floor:
        return CheckResult(name=name, passed=True, value=fine, detail="below residual floor")
    ratio = coarse / fine if fine > 0.0 else float("inf")
    passed = settings.ORDER_RATIO_MIN <= ratio <= settings.ORDER_RATIO_MAX
    return CheckResult(
        name=name,
        passed=passed,
        value=_finite_or_none(ratio),
        detail=f"ratio {ratio:.4g}, order {np.log2(ratio) if ratio > 0 else float('nan'):.3g}",
    )


def _converges(
    name: str,
    evaluate: Callable[[Grid], float],
    grid: Grid,
    records: list[ResidualRecord],
) -> CheckResult:
    coarse, fine = convergence(name, evaluate, grid)
    records.extend([coarse, fine])
    return _ratio_check(f"order:{name}", coarse.residual, fine.residual)


def _bound_check(name: str, value: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(
        name=name,
        passed=bool(np.isfinite(value) and value <= threshold),
        value=_finite_or_none(value),
        threshold=threshold,
        detail=detail,
    )


def _relative_gap(left: np.ndarray, right: np.ndarray) -> float:
    scale = np.maximum(1.0, np.maximum(np.abs(left), np.abs(right)))
    return float(np.max(np.abs(left - right) / scale))


def _operator_checks(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    records: list[ResidualRecord],
) -> list[CheckResult]:
    checks = [
        _converges(
            "similarity", lambda mesh: residual_similarity(profile, params, mesh), grid, records
        ),
        _converges(
            "pseudo_hermiticity",
            lambda mesh: residual_pseudo_hermiticity(profile, params, mesh),
            grid,
            records,
        ),
        _converges("commutator", lambda mesh: residual_commutator(profile, mesh), grid, records),
        CheckResult(name="eta_adjoint_exact", passed=eta_adjoint_exact(profile, grid)),
    ]
    if not params.is_balanced:
        coarse, fine = convergence(
            "pseudo_hermiticity_inverted_metric",
            lambda mesh: residual_pseudo_hermiticity(profile, params, mesh, invert=True),
            grid,
        )
        records.extend([coarse, fine])
        decays = fine.residual <= 0.5 * coarse.residual
        checks.append(
            CheckResult(
                name="control:inverted_metric_does_not_converge",
                passed=not decays,
                value=_finite_or_none(coarse.residual / max(fine.residual, np.finfo(float).tiny)),
            )
        )
    try:
        factorize(profile, params)
    except NotFactorizableError:
        logger.debug("Factorization checks skipped: alpha and beta both nonzero")
    else:
        checks.append(
            _converges(
                "factorization",
                lambda mesh: residual_factorization(profile, params, mesh),
                grid,
                records,
            )
        )
    return checks


def _pointwise_checks(profile: Profile, params: ModelParams, grid: Grid) -> list[CheckResult]:
    x = grid.nodes
    swapped = params.swapped()
    checks = []

    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        rho = rho_tilde(profile, params, x)
        rho_swapped = rho_tilde(profile, swapped, x)
    representable = np.isfinite(rho) & np.isfinite(rho_swapped) & (rho > 0) & (rho_swapped > 0)
    product = rho[representable] * rho_swapped[representable]
    checks.append(
        _bound_check(
            "metric:rho_times_swapped_rho",
            float(np.max(np.abs(product - 1.0), initial=0.0)),
            settings.METRIC_TOL,
            detail=f"{int(np.count_nonzero(representable))} of {x.size} nodes representable",
        )
    )
    positive = bool(np.all(rho[representable] ** 2 > 0.0))
    checks.append(CheckResult(name="metric:zeta_plus_positive", passed=positive))
    veff = v_eff_general(profile, params, x)
    veff_swapped = v_eff_general(profile, swapped, x)
    checks.append(
        _bound_check(
            "metric:veff_swap_symmetry",
            _relative_gap(veff, veff_swapped),
            settings.METRIC_TOL,
        )
    )
    if params.is_balanced:
        balanced = bool(np.all(rho == 1.0))
        checks.append(CheckResult(name="metric:balanced_rho_is_one", passed=balanced))

    try:
        factorization = factorize(profile, params)
    except NotFactorizableError:
        pass
    else:
        checks.append(
            _bound_check(
                f"factorization:{factorization.branch}",
                _relative_gap(veff, factorization.factorized_veff(x)),
                settings.IDENTITY_TOL,
            )
        )

    field = commutator_field(profile, x)
    if isinstance(profile, SolitonicProfile):
        expected = (2.0 * profile.kappa - 1.0) * profile.q**2 * np.cosh(profile.q * x) ** 2
        checks.append(
            _bound_check(
                "commutator:solitonic", _relative_gap(field, expected), settings.IDENTITY_TOL
            )
        )
    if isinstance(profile, CanonicalProfile):
        checks.append(
            _bound_check(
                "commutator:canonical",
                float(np.max(np.abs(field - 1.0))),
                10.0 * settings.IDENTITY_TOL,
            )
        )
    if profile.family == "morse" and isinstance(profile, CanonicalProfile):
        p = profile.generator.parameters()["p"]
        checks.append(
            _bound_check(
                "morse:veff",
                _relative_gap(
                    veff,
                    morse_veff(
                        p, profile.mu, params.alpha, params.beta, x, omega_tilde=params.omega_tilde
                    ),
                ),
                settings.IDENTITY_TOL,
            )
        )
        checks.append(
            _bound_check(
                "morse:rho",
                _relative_gap(
                    rho,
                    morse_rho(
                        p, profile.mu, params.alpha, params.beta, x, omega_tilde=params.omega_tilde
                    ),
                ),
                settings.IDENTITY_TOL,
            )
        )
    return checks


def _spectral_checks(report: SpectralReport) -> list[CheckResult]:
    checks = [
        CheckResult(
            name="spectrum:eigenpair_residuals",
            passed=bool(np.all(report.eigenpair_residuals <= report.residual_bound)),
            value=float(np.max(report.eigenpair_residuals)),
            threshold=report.residual_bound,
        ),
        CheckResult(name="spectrum:sturm_count", passed=report.sturm_confirmed),
    ]
    for level in report.levels:
        if level.rel_err is not None:
            checks.append(
                _bound_check(
                    f"closed_form:energy_{level.n}", level.rel_err, settings.CLOSED_FORM_RTOL
                )
            )
        if level.overlap is not None:
            checks.append(
                _bound_check(
                    f"closed_form:overlap_{level.n}", 1.0 - level.overlap, settings.OVERLAP_TOL
                )
            )
    return checks


def _closed_form_levels(profile: Profile, params: ModelParams, k: int) -> int:
    try:
        if closed_form_energy(profile, params, 0) is None:
            return 0
    except DomainError as error:
        logger.warning("Closed-form eigenfunctions not applicable: %s", error)
        return 0
    return min(k, EIGENFUNCTION_LEVELS)


def _ground_energy(profile: Profile, params: ModelParams, grid: Grid) -> float:
    return float(eig_symmetric_tridiagonal(build_h_tilde(profile, params, grid), 1).values[0])


def _transport_residual(profile: Profile, params: ModelParams, grid: Grid) -> float:
    pairs = eig_symmetric_tridiagonal(build_h_tilde(profile, params, grid), 1)
    phi = pairs.vectors[:, 0] / rho_tilde(profile, params, grid.nodes)
    big_h_tilde = build_H_tilde(profile, params, grid)
    difference = big_h_tilde.apply(phi) - pairs.values[0] * phi
    return float(np.linalg.norm(difference) / np.linalg.norm(phi))


def _oracle_checks(profile: Profile, params: ModelParams, grid: Grid) -> list[CheckResult]:
    """Reality and matrix-level isospectrality on two grids small enough for dense QR."""
    coarse = grid.model_copy(update={"n_interior": (settings.ORACLE_GRID_NODES - 1) // 2})
    fine = refine(coarse)
    checks = []
    gaps = []
    for mesh in (coarse, fine):
        big_h_tilde = build_H_tilde(profile, params, mesh)
        values = eig_dense_nonsymmetric(big_h_tilde)
        bound = settings.REALITY_TOL * big_h_tilde.norm_inf()
        checks.append(
            _bound_check(
                f"reality:n={mesh.n_interior}",
                float(np.max(np.abs(values.imag))),
                bound,
            )
        )
        levels = min(ISOSPECTRAL_LEVELS, mesh.n_interior)
        symmetric = eig_symmetric_tridiagonal(build_h_tilde(profile, params, mesh), levels).values
        gaps.append(_relative_gap(np.sort(values.real)[:levels], symmetric))
    checks.append(_ratio_check("order:isospectrality", gaps[0], gaps[1]))
    return checks


def run_verification(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    k: int,
) -> tuple[VerificationReport, SpectralReport]:
    """Run the identity suite.

    Args:
        profile (Profile): Ladder-operator profile.
        params (ModelParams): Swanson parameters.
        grid (Grid): Coarse grid; refinements halve its spacing.
        k (int): Number of levels compared against closed forms.

    Returns:
        tuple[VerificationReport, SpectralReport]: The verification record and the
            spectral report on `grid`.
    """
    records: list[ResidualRecord] = []
    checks = _operator_checks(profile, params, grid, records)
    checks.extend(_pointwise_checks(profile, params, grid))

    for n in range(_closed_form_levels(profile, params, k)):
        checks.append(
            _converges(
                f"eigenfunction_{n}",
                lambda mesh, level=n: residual_eigenfunction(profile, params, mesh, level),
                grid,
                records,
            )
        )

    report = make_report(profile, params, grid, k)
    records.extend(report.residuals)
    checks.extend(_spectral_checks(report))

    energies = [_ground_energy(profile, params, mesh) for mesh in (grid, refine(grid))]
    energies.append(_ground_energy(profile, params, refine(refine(grid))))
    checks.append(
        _ratio_check(
            "order:ground_energy",
            abs(energies[0] - energies[1]),
            abs(energies[1] - energies[2]),
        )
    )
    if not report.phi_overflow:
        checks.append(
            _converges(
                "transport",
                lambda mesh: _transport_residual(profile, params, mesh),
                grid,
                records,
            )
        )
    checks.extend(_oracle_checks(profile, params, grid))

    verification = VerificationReport(
        family=profile.family,
        params=params,
        grid=grid.describe(),
        checks=checks,
        residuals=records,
    )
    logger.info(
        "Verification of %s: %d checks, %d failed",
        profile.family,
        len(checks),
        len(verification.failures),
    )
    return verification, report
