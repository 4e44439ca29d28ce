import math

import numpy as np
import numpy.typing as npt
import pytest

from src.domain.exceptions import (
    ExpressionError,
    InvalidParameterError,
    PositivityViolationError,
    RangeError,
    SingularGeneratorError,
)
from src.domain.expressions import parse_profile_expression
from src.domain.model import ModelParams
from src.domain.profiles import (
    CanonicalProfile,
    HarmonicProfile,
    canonical_b_from_g,
    commutator_field,
    integrate_from_origin,
    make_custom,
    make_exponential,
    make_harmonic,
    make_morse,
    make_solitonic,
    pt_symmetry_predicate,
)

TEST_POINTS = np.linspace(-3.0, 3.0, 25)


def _profiles():
    return [
        make_harmonic(),
        make_solitonic(1.0, 2.0),
        make_solitonic(0.7, 1.3),
        make_morse(1.0, 0.0),
        make_morse(0.5, 0.2),
        make_custom("cosh(x)", "2*sinh(x)"),
    ]


def test_solitonic_values_at_origin(solitonic):
    assert solitonic.a(0.0) == pytest.approx(1.0)
    assert solitonic.da(0.0) == pytest.approx(0.0)
    assert solitonic.d2a(0.0) == pytest.approx(1.0)
    assert solitonic.b(0.0) == pytest.approx(0.0)
    assert solitonic.db(0.0) == pytest.approx(2.0)


def test_solitonic_antiderivative_and_mass(solitonic):
    assert solitonic.big_b(1.0) == pytest.approx(0.8675618, abs=1e-7)
    assert solitonic.mass(1.0) == pytest.approx(0.4199743, abs=1e-7)


def test_harmonic_values(harmonic):
    assert harmonic.a(1.0) == pytest.approx(0.7071068, abs=1e-7)
    assert harmonic.b(1.0) == pytest.approx(0.7071068, abs=1e-7)
    assert harmonic.big_b(2.0) == pytest.approx(2.0)
    np.testing.assert_allclose(harmonic.da(TEST_POINTS), 0.0)
    np.testing.assert_allclose(harmonic.d2a(TEST_POINTS), 0.0)
    np.testing.assert_allclose(harmonic.db(TEST_POINTS), 1.0 / math.sqrt(2.0))


@pytest.mark.parametrize("profile", _profiles(), ids=lambda profile: profile.family)
def test_derivatives_match_central_differences(profile):
    errors = []
    for step in (1e-3, 5e-4):
        forward, backward = TEST_POINTS + step, TEST_POINTS - step
        errors.append(
            max(
                np.max(np.abs((profile.a(forward) - profile.a(backward)) / (2 * step)
                              - profile.da(TEST_POINTS))),
                np.max(np.abs((profile.da(forward) - profile.da(backward)) / (2 * step)
                              - profile.d2a(TEST_POINTS))),
                np.max(np.abs((profile.b(forward) - profile.b(backward)) / (2 * step)
                              - profile.db(TEST_POINTS))),
            )
        )
    assert errors[0] < 1e-4
    assert errors[1] < 0.3 * errors[0] or errors[1] < 1e-9


@pytest.mark.parametrize("profile", _profiles(), ids=lambda profile: profile.family)
def test_antiderivative_matches_quadrature(profile):
    points = np.linspace(-2.0, 2.0, 9)
    numeric = integrate_from_origin(lambda t: float(profile.b(t) / profile.a(t)), points)
    np.testing.assert_allclose(profile.big_b(points), numeric, atol=1e-9)


def test_make_solitonic_rejects_nonpositive_q():
    with pytest.raises(InvalidParameterError):
        make_solitonic(0.0, 2.0)
    with pytest.raises(InvalidParameterError):
        make_solitonic(-1.0, 2.0)


def test_make_exponential_rejects_zero_p():
    with pytest.raises(InvalidParameterError):
        make_exponential(0.0)


def test_canonical_b_from_linear_generator():
    profile = canonical_b_from_g(make_custom("1"), mu=0.3)
    np.testing.assert_allclose(profile.b(TEST_POINTS), TEST_POINTS / 2 + 0.3, atol=1e-9)


def test_canonical_b_from_solitonic_generator():
    profile = canonical_b_from_g(make_solitonic(1.0, 2.0))
    expected = 0.5 * np.sinh(TEST_POINTS) + np.arctan(np.exp(TEST_POINTS))
    np.testing.assert_allclose(profile.b(TEST_POINTS), expected, atol=1e-12)


def test_canonical_b_from_exponential_generator():
    profile = canonical_b_from_g(make_exponential(1.0))
    expected = 0.5 * np.exp(TEST_POINTS) - 0.5 * np.exp(-TEST_POINTS)
    np.testing.assert_allclose(profile.b(TEST_POINTS), expected, atol=1e-12)
    assert profile.family == "morse"


def test_canonical_b_from_g_rejects_nonfinite_mu():
    with pytest.raises(InvalidParameterError):
        canonical_b_from_g(make_exponential(1.0), mu=float("nan"))


class FlatGenerator(HarmonicProfile):
    """Generator whose slope g' = x vanishes at the origin."""

    def dg(self: "FlatGenerator", x: npt.ArrayLike) -> np.ndarray:
        return np.asarray(x, dtype=np.float64)


def test_singular_generator_is_rejected():
    with pytest.raises(SingularGeneratorError):
        canonical_b_from_g(FlatGenerator())


def test_commutator_field_harmonic_is_one(harmonic):
    np.testing.assert_allclose(commutator_field(harmonic, TEST_POINTS), 1.0, atol=1e-15)


def test_commutator_field_solitonic(solitonic):
    assert commutator_field(solitonic, 0.0) == pytest.approx(3.0)
    expected = 3.0 * np.cosh(TEST_POINTS) ** 2
    np.testing.assert_allclose(commutator_field(solitonic, TEST_POINTS), expected, rtol=1e-10)


@pytest.mark.parametrize(
    "generator",
    [make_solitonic(1.0, 2.0), make_exponential(1.0), make_exponential(-0.5), make_harmonic()],
    ids=lambda profile: profile.family,
)
def test_canonical_profiles_restore_the_canonical_commutator(generator):
    profile = canonical_b_from_g(generator, mu=0.1)
    assert isinstance(profile, CanonicalProfile)
    np.testing.assert_allclose(commutator_field(profile, TEST_POINTS), 1.0, atol=1e-9)


def test_pt_predicate_holds_for_harmonic(harmonic):
    for alpha, beta in [(0.0, 0.0), (0.4, 0.2), (-0.3, 0.1)]:
        params = ModelParams(omega=2.0, alpha=alpha, beta=beta)
        assert pt_symmetry_predicate(harmonic, params, TEST_POINTS)


def test_pt_predicate_evaluates_for_solitonic(solitonic, solitonic_params):
    assert isinstance(pt_symmetry_predicate(solitonic, solitonic_params, TEST_POINTS), bool)


def test_pt_predicate_rejects_nonpositive_profile():
    profile = make_custom("sinh(x) + 0.5")
    params = ModelParams(omega=1.0)
    with pytest.raises(PositivityViolationError):
        pt_symmetry_predicate(profile, params, TEST_POINTS)


def test_pt_predicate_needs_symmetric_points(harmonic):
    with pytest.raises(InvalidParameterError):
        pt_symmetry_predicate(harmonic, ModelParams(omega=1.0), [0.0, 1.0, 2.0])


def test_check_domain_rejects_overflow(solitonic):
    with pytest.raises(RangeError):
        solitonic.check_domain([0.0, 30.0])


def test_custom_profile_matches_solitonic():
    custom = make_custom("cosh(x)", "2*sinh(x)")
    solitonic = make_solitonic(1.0, 2.0)
    for name in ("a", "da", "d2a", "b", "db"):
        np.testing.assert_allclose(
            getattr(custom, name)(TEST_POINTS), getattr(solitonic, name)(TEST_POINTS), rtol=1e-12
        )


@pytest.mark.parametrize(
    "text",
    ["__import__('os')", "y*x", "sin(x)", "x; 1", "", "exp(x"],
)
def test_expression_grammar_rejects_foreign_input(text):
    with pytest.raises(ExpressionError):
        parse_profile_expression(text)


def test_expression_errors_are_invalid_parameters():
    with pytest.raises(InvalidParameterError):
        make_custom("lambda")
