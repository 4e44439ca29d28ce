import math

import numpy as np
import pytest

from src.domain.model import ModelParams
from src.domain.profiles import make_harmonic, make_morse, make_solitonic
from src.service.discrete.grid import Grid, default_grid, refine
from src.service.discrete.operators import build_h_tilde, build_H_tilde
from src.service.exceptions import DimensionTooLargeError, EigenRangeError, MatrixStructureError
from src.service.spectra.report import make_report
from src.service.spectra.solvers import (
    eig_dense_nonsymmetric,
    eig_symmetric_tridiagonal,
    sturm_count,
)

LAPLACIAN = np.array([[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]])


def test_small_laplacian_spectrum():
    pairs = eig_symmetric_tridiagonal(LAPLACIAN, 3)
    expected = [2.0 - math.sqrt(2.0), 2.0, 2.0 + math.sqrt(2.0)]
    np.testing.assert_allclose(pairs.values, expected, atol=1e-12)
    assert pairs.residuals_ok
    assert pairs.sturm_confirmed
    assert not pairs.clusters


@pytest.mark.parametrize("k", [0, 4])
def test_level_count_out_of_range(k):
    with pytest.raises(EigenRangeError):
        eig_symmetric_tridiagonal(LAPLACIAN, k)


def test_nonsymmetric_input_is_rejected():
    with pytest.raises(MatrixStructureError):
        eig_symmetric_tridiagonal(np.array([[2.0, 1.0], [0.0, 2.0]]), 1)


def test_sturm_count():
    assert sturm_count(LAPLACIAN, 1.0) == 1
    assert sturm_count(LAPLACIAN, 2.5) == 2
    assert sturm_count(LAPLACIAN, 0.0) == 0


def test_harmonic_levels():
    profile = make_harmonic()
    params = ModelParams(omega=1.0)
    grid = Grid(x_min=-10.0, x_max=10.0, n_interior=2000)
    pairs = eig_symmetric_tridiagonal(build_h_tilde(profile, params, grid), 5)
    np.testing.assert_allclose(pairs.values, [0.5, 1.5, 2.5, 3.5, 4.5], atol=2e-4)
    assert pairs.residuals_ok
    assert pairs.sturm_confirmed
    np.testing.assert_allclose(grid.h * np.sum(pairs.vectors**2, axis=0), 1.0)


def test_dense_solver_sorts_by_real_part():
    rotation = eig_dense_nonsymmetric(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    np.testing.assert_allclose(np.sort(rotation.imag), [-1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(rotation.real, 0.0, atol=1e-12)
    np.testing.assert_allclose(
        eig_dense_nonsymmetric(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0], atol=1e-12
    )
    np.testing.assert_allclose(
        eig_dense_nonsymmetric(np.array([[2.0, 1.0], [1.0, 2.0]])), [1.0, 3.0], atol=1e-12
    )


def test_dense_solver_dimension_limit():
    with pytest.raises(DimensionTooLargeError):
        eig_dense_nonsymmetric(LAPLACIAN, max_dim=2)


def test_boundary_insensitivity():
    profile = make_harmonic()
    params = ModelParams(omega=1.0)
    narrow = Grid(x_min=-10.0, x_max=10.0, n_interior=999)
    wide = Grid(x_min=-20.0, x_max=20.0, n_interior=1999)
    near = eig_symmetric_tridiagonal(build_h_tilde(profile, params, narrow), 4).values
    far = eig_symmetric_tridiagonal(build_h_tilde(profile, params, wide), 4).values
    assert np.max(np.abs(near - far)) < 2e-8


def test_harmonic_report_against_closed_forms():
    profile = make_harmonic()
    params = ModelParams(omega=2.0, alpha=0.4, beta=0.2)
    grid = default_grid(profile, 399, params=params)
    report = make_report(profile, params, grid, 3)
    assert report.oracle_grid == grid
    assert report.reality_ok
    assert report.levels[0].rel_err < 1e-3
    assert all(level.rel_err < 5e-3 for level in report.levels)
    assert all(level.overlap > 0.999 for level in report.levels)
    assert report.isospectral_gap() < 1e-2
    np.testing.assert_allclose(report.orthogonality, np.eye(3), atol=1e-8)
    assert not report.phi_overflow
    assert {record.name for record in report.residuals} == {
        "similarity",
        "pseudo_hermiticity",
        "commutator",
    }


def test_solitonic_report():
    profile = make_solitonic(1.0, 2.0)
    params = ModelParams(omega=1.1, alpha=0.1, beta=0.0)
    grid = default_grid(profile, 399, params=params)
    report = make_report(profile, params, grid, 3)
    assert report.sturm_confirmed
    assert np.all(report.eigenpair_residuals <= report.residual_bound)
    assert all(level.rel_err < 2e-2 for level in report.levels)
    assert report.levels[0].e_closed_form == pytest.approx(0.55)
    np.testing.assert_allclose(report.orthogonality, np.eye(3), atol=1e-8)
    assert "factorization" in {record.name for record in report.residuals}


def test_oracle_is_skipped_on_large_grids_unless_forced():
    profile = make_harmonic()
    params = ModelParams(omega=2.0, alpha=0.4, beta=0.2)
    grid = default_grid(profile, 800, params=params)
    assert make_report(profile, params, grid, 2).max_im is None
    forced = make_report(profile, params, grid, 2, oracle=True)
    assert forced.oracle_grid is not None
    assert forced.oracle_grid.n_interior == 200
    assert forced.isospectral_gap() is None


def test_jones_levels_on_a_fine_grid():
    profile = make_harmonic()
    params = ModelParams(omega=2.0, alpha=0.4, beta=0.2)
    grid = Grid(x_min=-10.0, x_max=10.0, n_interior=2000)
    report = make_report(profile, params, grid, 5)
    expected = (np.arange(5) + 0.5) * math.sqrt(2.0**2 - 4 * 0.4 * 0.2)
    np.testing.assert_allclose(report.energies, expected, rtol=1e-4)
    assert all(level.rel_err <= 1e-4 for level in report.levels)


def test_solitonic_levels_on_a_fine_grid():
    profile = make_solitonic(1.0, 2.0)
    params = ModelParams(omega=1.1, alpha=0.1, beta=0.0)
    grid = default_grid(profile, 4000, params=params)
    report = make_report(profile, params, grid, 4)
    assert [level.e_closed_form for level in report.levels] == pytest.approx(
        [0.55, 4.85, 11.15, 19.45]
    )
    assert all(level.rel_err <= 1e-3 for level in report.levels)


@pytest.mark.parametrize(
    ("profile", "params"),
    [
        (make_harmonic(), ModelParams(omega=2.0, alpha=0.4, beta=0.2)),
        (make_solitonic(1.0, 2.0), ModelParams(omega=1.1, alpha=0.1, beta=0.0)),
        (make_morse(1.0), ModelParams(omega=1.3, alpha=0.2, beta=0.1)),
    ],
    ids=["harmonic", "solitonic", "morse"],
)
def test_nonsymmetric_operator_has_a_real_spectrum(profile, params):
    grid = default_grid(profile, 200, params=params)
    big_h_tilde = build_H_tilde(profile, params, grid)
    values = eig_dense_nonsymmetric(big_h_tilde)
    assert values.size == 200
    assert np.max(np.abs(values.imag)) <= 1e-8 * big_h_tilde.norm_inf()


def _ground_energy(profile, params, grid: Grid) -> float:
    return eig_symmetric_tridiagonal(build_h_tilde(profile, params, grid), 1).values[0]


def test_ground_energy_converges_at_second_order():
    profile = make_harmonic()
    params = ModelParams(omega=2.0, alpha=0.4, beta=0.2)
    grid = default_grid(profile, 999, params=params)
    energies = [
        _ground_energy(profile, params, mesh) for mesh in (grid, refine(grid), refine(refine(grid)))
    ]
    ratio = abs(energies[0] - energies[1]) / abs(energies[1] - energies[2])
    assert 3.5 <= ratio <= 4.5


def test_nonsymmetric_and_hermitian_levels_agree_up_to_discretization():
    profile = make_harmonic()
    params = ModelParams(omega=2.0, alpha=0.4, beta=0.2)
    coarse = default_grid(profile, 99, params=params)
    gaps = [
        make_report(profile, params, mesh, 5).isospectral_gap(5)
        for mesh in (coarse, refine(coarse))
    ]
    assert gaps[1] < gaps[0]
    assert 3.5 <= gaps[0] / gaps[1] <= 4.5


def test_transported_eigenvector_solves_the_nonsymmetric_problem():
    profile = make_harmonic()
    params = ModelParams(omega=2.0, alpha=0.4, beta=0.2)
    grid = default_grid(profile, 999, params=params)
    coarse = make_report(profile, params, grid, 1).transport_residuals[0]
    fine = make_report(profile, params, refine(grid), 1).transport_residuals[0]
    assert fine < coarse
    assert 3.5 <= coarse / fine <= 4.5
