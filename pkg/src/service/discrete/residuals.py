"""Residuals of the operator identities on smooth test vectors, with convergence orders.

Residuals are ||(A v)_interior||_2 / ||v||_2 maximized over the test vectors,
where rows near the Dirichlet boundaries are excluded.
"""

import math
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.core.config import settings
from src.core.logger import logger
from src.domain.closedform import closed_form_energy, closed_form_wavefunction, factorize
from src.domain.exceptions import InvalidParameterError
from src.domain.model import ModelParams, rho_tilde
from src.domain.profiles import FloatArray, Profile, commutator_field
from src.service.discrete.grid import Grid, refine
from src.service.discrete.operators import (
    build_eta,
    build_eta_dagger,
    build_eta_one,
    build_h_tilde,
    build_H_tilde,
)

BOUNDARY_MARGIN = 2
TEST_CENTERS = (-1.0, 0.0, 1.0)
TEST_WIDTHS = (0.5, 1.0)


class ResidualRecord(BaseModel):
    """One residual measurement, serialized as a JSON record."""

    model_config = ConfigDict(frozen=True)

    name: str
    h: float
    residual: float
    order_estimate: float | None = None


def gaussian_test_vectors(grid: Grid) -> FloatArray:
    """Columns exp(-(x - c)^2 / (2 s^2)) for c in {-1, 0, 1} and s in {0.5, 1}."""
    nodes = grid.nodes[:, np.newaxis]
    columns = [
        np.exp(-((nodes - center) ** 2) / (2.0 * width**2))
        for center in TEST_CENTERS
        for width in TEST_WIDTHS
    ]
    return np.hstack(columns)


def interior_residual(difference: FloatArray, vectors: FloatArray) -> float:
    """max_j ||difference[:, j]||_2 / ||vectors[:, j]||_2 over interior rows."""
    difference = np.asarray(difference).reshape(vectors.shape[0], -1)
    vectors = vectors.reshape(vectors.shape[0], -1)
    inner = slice(BOUNDARY_MARGIN, vectors.shape[0] - BOUNDARY_MARGIN)
    numerators = np.linalg.norm(difference[inner], axis=0)
    denominators = np.linalg.norm(vectors, axis=0)
    return float(np.max(numerators / denominators))


def _vectors(grid: Grid, test_vectors: FloatArray | None) -> FloatArray:
    return gaussian_test_vectors(grid) if test_vectors is None else np.asarray(test_vectors)


def residual_similarity(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    test_vectors: FloatArray | None = None,
) -> float:
    """Residual of D(rho~) H~ D(rho~)^-1 - h~."""
    vectors = _vectors(grid, test_vectors)
    rho = rho_tilde(profile, params, grid.nodes)[:, np.newaxis]
    h_tilde = build_h_tilde(profile, params, grid)
    big_h_tilde = build_H_tilde(profile, params, grid)
    difference = rho * big_h_tilde.apply(vectors / rho) - h_tilde.apply(vectors)
    return interior_residual(difference, vectors)


def residual_pseudo_hermiticity(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    test_vectors: FloatArray | None = None,
    *,
    invert: bool = False,
) -> float:
    """Residual of D(zeta+) H~ D(zeta+)^-1 - H~^T.

    With `invert` the metric is replaced by its inverse, a control that must not
    converge unless alpha == beta.
    """
    vectors = _vectors(grid, test_vectors)
    metric = rho_tilde(profile, params, grid.nodes)[:, np.newaxis] ** 2
    if invert:
        metric = 1.0 / metric
    big_h_tilde = build_H_tilde(profile, params, grid)
    difference = metric * big_h_tilde.apply(vectors / metric) - big_h_tilde.transpose().apply(
        vectors
    )
    return interior_residual(difference, vectors)


def residual_factorization(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    test_vectors: FloatArray | None = None,
) -> float:
    """Residual of omega~ eta_1^T eta_1 + xi - h~.

    Raises:
        NotFactorizableError: If both alpha and beta are nonzero.
    """
    vectors = _vectors(grid, test_vectors)
    factorization = factorize(profile, params)
    eta_one = build_eta_one(factorization, grid).matrix
    h_tilde = build_h_tilde(profile, params, grid)
    factorized = factorization.omega_tilde * (eta_one.T @ (eta_one @ vectors))
    difference = factorized + factorization.xi * vectors - h_tilde.apply(vectors)
    return interior_residual(difference, vectors)


def residual_commutator(
    profile: Profile,
    grid: Grid,
    test_vectors: FloatArray | None = None,
) -> float:
    """Residual of [eta, eta^dagger] - (2ab' - aa'')."""
    vectors = _vectors(grid, test_vectors)
    eta = build_eta(profile, grid).matrix
    eta_dagger = build_eta_dagger(profile, grid).matrix
    commutator = eta @ (eta_dagger @ vectors) - eta_dagger @ (eta @ vectors)
    field = commutator_field(profile, grid.nodes)[:, np.newaxis]
    return interior_residual(commutator - field * vectors, vectors)


def residual_eigenfunction(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
    n: int,
) -> float:
    """Relative residual ||h~ chi_n - E_n chi_n|| / ||chi_n|| of a closed-form eigenpair.

    Raises:
        InvalidParameterError: If the family has no closed-form eigenfunctions.
    """
    chi = closed_form_wavefunction(profile, params, n, grid.nodes)
    energy = closed_form_energy(profile, params, n)
    if chi is None or energy is None:
        error_message = f"Family {profile.family} has no closed-form eigenfunctions."
        raise InvalidParameterError(error_message)
    h_tilde = build_h_tilde(profile, params, grid)
    vectors = chi[:, np.newaxis]
    return interior_residual(h_tilde.apply(vectors) - energy * vectors, vectors)


def eta_adjoint_exact(profile: Profile, grid: Grid) -> bool:
    """True when the assembled eta^dagger equals the transpose of eta entry by entry."""
    eta = build_eta(profile, grid)
    eta_dagger = build_eta_dagger(profile, grid)
    return bool(
        np.array_equal(eta.upper, eta_dagger.lower)
        and np.array_equal(eta.lower, eta_dagger.upper)
        and np.array_equal(eta.main, eta_dagger.main)
    )


def observed_order(coarse: float, fine: float) -> float | None:
    """log2(coarse/fine); None below the residual floor or when the fine residual vanishes."""
    floor = settings.RESIDUAL_FLOOR
    if coarse <= floor and fine <= floor:
        return None
    if fine <= 0.0:
        return None
    return math.log2(coarse / fine)


def convergence(
    name: str,
    evaluate: Callable[[Grid], float],
    grid: Grid,
) -> list[ResidualRecord]:
    """Evaluate a residual on `grid` and on its refinement and estimate the order.

    Args:
        name (str): Residual name for the records.
        evaluate (Callable[[Grid], float]): Residual as a function of the grid.
        grid (Grid): Coarse grid; the fine grid halves its spacing.

    Returns:
        list[ResidualRecord]: Coarse and fine records, both carrying the order.
    """
    fine_grid = refine(grid)
    coarse = evaluate(grid)
    fine = evaluate(fine_grid)
    order = observed_order(coarse, fine)
    logger.debug("Residual %s: %.3e -> %.3e, order %s", name, coarse, fine, order)
    return [
        ResidualRecord(name=name, h=grid.h, residual=coarse, order_estimate=order),
        ResidualRecord(name=name, h=fine_grid.h, residual=fine, order_estimate=order),
    ]
