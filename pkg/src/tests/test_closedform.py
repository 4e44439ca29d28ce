import math

import numpy as np
import pytest

from src.domain.closedform import (
    closed_form_energy,
    closed_form_wavefunction,
    factorize,
    gegenbauer,
    gegenbauer_series,
    harmonic_spectrum,
    harmonic_wavefunction,
    jones_rho,
    morse_rho,
    morse_veff,
    solitonic_data,
    solitonic_energy,
    solitonic_expansion,
    solitonic_wavefunction,
    transformed_wavefunction,
    veff_from_g,
)
from src.domain.exceptions import (
    ComplexLambdaError,
    InvalidParameterError,
    NoRealSpectrumError,
    NotFactorizableError,
    SingularGeneratorError,
)
from src.domain.model import ModelParams, v_eff
from src.domain.profiles import (
    HarmonicProfile,
    canonical_b_from_g,
    make_custom,
    make_exponential,
    make_harmonic,
    make_solitonic,
)

GRID = np.linspace(-4.0, 4.0, 81)


@pytest.mark.parametrize(
    ("omega", "alpha", "beta", "n", "expected"),
    [
        (1.0, 0.0, 0.0, 0, 0.5),
        (2.0, 0.4, 0.2, 0, 0.9591663),
        (2.0, 0.4, 0.2, 3, 6.7141642),
    ],
)
def test_harmonic_spectrum(omega, alpha, beta, n, expected):
    params = ModelParams(omega=omega, alpha=alpha, beta=beta)
    assert harmonic_spectrum(params, n) == pytest.approx(expected, abs=1e-7)


def test_harmonic_spectrum_without_real_levels():
    params = ModelParams(omega=1.0, alpha=-0.6, beta=-0.6)
    with pytest.raises(NoRealSpectrumError):
        harmonic_spectrum(params, 0)


def test_harmonic_spectrum_rejects_negative_level(jones_params):
    with pytest.raises(InvalidParameterError):
        harmonic_spectrum(jones_params, -1)


def test_jones_rho_is_symmetric_in_the_parameters(jones_params):
    swapped = jones_params.swapped()
    np.testing.assert_allclose(jones_rho(jones_params, GRID) * jones_rho(swapped, GRID), 1.0)


def test_harmonic_ground_state_is_gaussian():
    params = ModelParams(omega=1.0)
    np.testing.assert_allclose(harmonic_wavefunction(params, 0, GRID), np.exp(-0.5 * GRID**2))


def test_solitonic_data():
    data = solitonic_data(1.0, 2.0, 0.1, 0.0)
    assert data.big_delta == pytest.approx(1.3225, abs=1e-12)
    assert data.lam == pytest.approx(1.65, abs=1e-12)
    assert data.cosh2_coefficient == pytest.approx(0.3225, abs=1e-12)
    quarter = 0.25 * (2 * data.lam + 1) * (2 * data.lam - 3)
    assert data.cosh2_coefficient == pytest.approx(quarter, abs=1e-12)
    assert data.v0 == pytest.approx(-1.9225, abs=1e-12)


def test_solitonic_data_rejects_vanishing_delta():
    with pytest.raises(ComplexLambdaError):
        solitonic_data(1.0, 1.0, 0.0, 0.0)


def test_solitonic_data_rejects_small_kappa():
    with pytest.raises(InvalidParameterError):
        solitonic_data(1.0, 0.4, 0.1, 0.0)


def test_solitonic_energies():
    data = solitonic_data(1.0, 2.0, 0.1, 0.0)
    assert solitonic_energy(data, 0) - data.v0 == pytest.approx(2.4725, abs=1e-12)
    assert solitonic_energy(data, 1) - data.v0 == pytest.approx(6.7725, abs=1e-12)
    for n in range(10):
        gap = solitonic_energy(data, n + 1) - solitonic_energy(data, n)
        assert gap == pytest.approx(2 * n + 2 * data.lam + 1)
        assert gap > 0
    assert data.energy(2) == solitonic_energy(data, 2)


def test_solitonic_energy_scales_with_omega_tilde():
    unit = solitonic_data(1.0, 2.0, 0.1, 0.0)
    scaled = solitonic_data(1.0, 2.0, 0.2, 0.0, omega_tilde=2.0)
    assert scaled.lam == pytest.approx(unit.lam)
    assert solitonic_energy(scaled, 3) == pytest.approx(2.0 * solitonic_energy(unit, 3))


def test_symbolic_expansion_recovers_the_cosh_square_coefficient():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 10:
        kappa = rng.uniform(0.6, 3.0)
        alpha, beta = rng.uniform(-0.3, 0.3, size=2)
        q = rng.uniform(0.5, 2.0)
        data_delta = (
            (kappa - 1) ** 2
            + (kappa - 1) * (2 * kappa - 1) * (alpha + beta)
            + (kappa - 0.5) ** 2 * (alpha - beta) ** 2
        )
        if data_delta <= 0:
            continue
        quadratic, _ = solitonic_expansion(q, kappa, alpha, beta)
        assert quadratic == pytest.approx(q**2 * (data_delta - 1), abs=1e-12)
        checked += 1


@pytest.mark.parametrize(
    ("n", "lam", "t", "expected"),
    [
        (0, 1.65, 0.3, 1.0),
        (1, 1.65, math.tanh(1.0), 2.5132607),
        (2, 1.65, 0.0, -1.65),
    ],
)
def test_gegenbauer_values(n, lam, t, expected):
    assert gegenbauer(n, lam, t) == pytest.approx(expected, abs=1e-7)


@pytest.mark.parametrize("lam", [0.7, 1.65, 3.2])
def test_gegenbauer_recurrence_matches_series(lam):
    points = np.linspace(-1.0, 1.0, 21)
    for n in range(7):
        series = gegenbauer_series(n, lam, points)
        scale = max(1.0, float(np.max(np.abs(series))))
        assert np.max(np.abs(gegenbauer(n, lam, points) - series)) <= 1e-12 * scale


def test_gegenbauer_degree_is_capped():
    with pytest.raises(InvalidParameterError):
        gegenbauer(65, 1.0, 0.0)


def test_solitonic_wavefunctions(solitonic, solitonic_params):
    data = solitonic_data(1.0, 2.0, 0.1, 0.0)
    assert solitonic_wavefunction(data, 0, 0.0) == pytest.approx(1.0)
    assert solitonic_wavefunction(data, 1, 0.0) == pytest.approx(0.0)
    expected = math.cosh(1.0) ** 0.15 / math.cosh(1.0) ** 2.15
    phi = transformed_wavefunction(data, solitonic, solitonic_params, 0, 1.0)
    assert phi == pytest.approx(expected, rel=1e-12)
    assert phi == pytest.approx(0.42, abs=5e-3)


def test_morse_closed_forms():
    assert morse_veff(1.0, 0.0, 0.0, 0.0, 0.0) == pytest.approx(-0.5)
    assert morse_rho(1.0, 0.0, 0.2, 0.0, 0.0) == pytest.approx(0.9512294, abs=1e-7)
    np.testing.assert_array_equal(morse_rho(1.0, 0.3, 0.15, 0.15, GRID), 1.0)
    with pytest.raises(InvalidParameterError):
        morse_veff(0.0, 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(InvalidParameterError):
        morse_rho(0.0, 0.0, 0.0, 0.0, 0.0)


def test_veff_from_linear_generator():
    assert veff_from_g(make_custom("1"), 0.0, 0.0, 0.0, 2.0) == pytest.approx(1.0, abs=1e-9)


def test_veff_from_exponential_generator_matches_morse():
    generator = make_exponential(1.0)
    assert veff_from_g(generator, 0.0, 0.0, 0.0, 0.0) == pytest.approx(-0.5)
    np.testing.assert_allclose(
        veff_from_g(generator, 0.2, 0.1, 0.05, GRID, omega_tilde=1.5),
        morse_veff(1.0, 0.2, 0.1, 0.05, GRID, omega_tilde=1.5),
        rtol=1e-12,
    )


@pytest.mark.parametrize(
    "generator",
    [make_solitonic(1.0, 2.0), make_exponential(1.0), make_harmonic()],
    ids=lambda profile: profile.family,
)
def test_veff_from_g_matches_generic_effective_potential(generator):
    params = ModelParams(omega=1.15, alpha=0.1, beta=0.05)
    profile = canonical_b_from_g(generator, mu=0.2)
    points = np.linspace(-2.0, 2.0, 41)
    expected = v_eff(profile, params, points)
    actual = veff_from_g(generator, 0.2, params.alpha, params.beta, points)
    scale = np.maximum(1.0, np.abs(expected))
    assert np.max(np.abs(actual - expected) / scale) <= 1e-10


class KinkedGenerator(HarmonicProfile):
    """Generator whose slope g' = x^2 vanishes at the origin."""

    def dg(self: "KinkedGenerator", x: object) -> np.ndarray:
        return np.asarray(x, dtype=np.float64) ** 2


def test_veff_from_g_rejects_vanishing_slope():
    with pytest.raises(SingularGeneratorError):
        veff_from_g(KinkedGenerator(), 0.0, 0.0, 0.0, np.array([-1.0, 0.0, 1.0]))


def test_factorization_without_swanson_terms(harmonic):
    data = factorize(harmonic, ModelParams(omega=1.0))
    assert (data.d1, data.d2, data.xi) == pytest.approx((1.0, 0.0, 0.5))
    np.testing.assert_allclose(data.b1(GRID), harmonic.b(GRID))


def test_factorization_beta_zero_branch(solitonic, solitonic_params):
    data = factorize(solitonic, solitonic_params)
    assert data.branch == "beta_zero"
    assert data.xi == pytest.approx(0.55)
    np.testing.assert_allclose(data.b1(GRID), 2.15 * np.sinh(GRID), atol=1e-12)


def test_factorization_alpha_zero_branch_mirrors(solitonic):
    mirrored = factorize(solitonic, ModelParams(omega=1.1, alpha=0.0, beta=0.1))
    assert mirrored.branch == "alpha_zero"
    assert mirrored.xi == pytest.approx(0.55)
    np.testing.assert_allclose(mirrored.b1(GRID), 2.15 * np.sinh(GRID), atol=1e-12)


def test_factorization_needs_a_vanishing_parameter(solitonic, jones_params):
    with pytest.raises(NotFactorizableError):
        factorize(solitonic, jones_params)


@pytest.mark.parametrize(
    "profile",
    [make_harmonic(), make_solitonic(1.0, 2.0), make_solitonic(0.8, 1.4)],
    ids=lambda profile: profile.family,
)
@pytest.mark.parametrize(
    ("alpha", "beta", "omega"),
    [(0.1, 0.0, 1.1), (0.0, 0.1, 1.1), (0.3, 0.0, 2.0), (0.0, 0.0, 1.0)],
)
def test_factorization_identity(profile, alpha, beta, omega):
    params = ModelParams(omega=omega, alpha=alpha, beta=beta)
    data = factorize(profile, params)
    expected = v_eff(profile, params, GRID)
    scale = np.maximum(1.0, np.abs(expected))
    assert np.max(np.abs(data.factorized_veff(GRID) - expected) / scale) <= 1e-10


def test_family_dispatch(harmonic, morse, jones_params, solitonic, solitonic_params):
    assert closed_form_energy(harmonic, jones_params, 0) == pytest.approx(0.9591663, abs=1e-7)
    data = solitonic_data(1.0, 2.0, 0.1, 0.0)
    assert closed_form_energy(solitonic, solitonic_params, 1) == pytest.approx(data.energy(1))
    assert closed_form_energy(morse, jones_params, 0) is None
    assert closed_form_wavefunction(morse, jones_params, 0, GRID) is None
