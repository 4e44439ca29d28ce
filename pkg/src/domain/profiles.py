"""Ladder-operator profiles (a(x), b(x)) defining eta = a d/dx + b.

Every profile is an immutable pydantic model exposing analytic, vectorized
evaluators for a, a', a'', b, b', the antiderivative B(x) = int_0^x b/a and, where
the family defines one, the generator g with g' = 1/a and its derivatives.
"""

import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from typing import TYPE_CHECKING, Literal

import numpy as np
import numpy.typing as npt
import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, SerializeAsAny
from scipy.integrate import quad

from src.core.config import settings
from src.core.logger import logger
from src.domain.exceptions import (
    InvalidParameterError,
    PositivityViolationError,
    RangeError,
    SingularGeneratorError,
)
from src.domain.expressions import (
    ScalarFunction,
    compile_expression,
    derivatives,
    parse_profile_expression,
)

if TYPE_CHECKING:
    from src.domain.model import ModelParams

FloatArray = npt.NDArray[np.float64]

_SQRT2 = math.sqrt(2.0)


def _as_array(x: npt.ArrayLike) -> FloatArray:
    return np.asarray(x, dtype=np.float64)


def integrate_from_origin(function: Callable[[float], float], x: npt.ArrayLike) -> FloatArray:
    """Evaluate int_0^x function(t) dt at every point of `x` by adaptive quadrature.

    Points are sorted on each side of the origin and the integral is accumulated
    over consecutive sub-intervals, so each quadrature call spans a short interval.

    Args:
        function (Callable[[float], float]): Scalar integrand.
        x (npt.ArrayLike): Evaluation points.

    Returns:
        FloatArray: Integral values with the shape of `x`.
    """
    points = _as_array(x)
    flat = points.ravel()
    result = np.zeros_like(flat)
    for side in (flat >= 0.0, flat < 0.0):
        indices = np.flatnonzero(side)
        order = indices[np.argsort(np.abs(flat[indices]), kind="stable")]
        previous, total = 0.0, 0.0
        for index in order:
            upper = float(flat[index])
            if upper != previous:
                value, _ = quad(
                    function,
                    previous,
                    upper,
                    epsabs=settings.QUAD_EPSABS,
                    epsrel=settings.QUAD_EPSREL,
                    limit=200,
                )
                total += value
                previous = upper
            result[index] = total
    return result.reshape(points.shape)


class Profile(BaseModel, ABC):
    """A first-order ladder-operator profile eta = a(x) d/dx + b(x).

    Attributes:
        family (str): Family tag, one of harmonic, solitonic, morse,
            canonical-from-g, custom (plus the exponential generator helper).
    """

    model_config = ConfigDict(frozen=True)

    family: str

    has_generator: bool = Field(default=False, exclude=True)

    @property
    def length_scale(self: "Profile") -> float:
        """Inverse length scale q' of the family, used for default domains."""
        return 1.0

    @property
    def gauge_offset(self: "Profile") -> float:
        """Closed-form gauge constant added to B in the metric exponent."""
        return 0.0

    @abstractmethod
    def a(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate a(x)."""

    @abstractmethod
    def da(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate a'(x)."""

    @abstractmethod
    def d2a(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate a''(x)."""

    @abstractmethod
    def b(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate b(x)."""

    @abstractmethod
    def db(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate b'(x)."""

    @abstractmethod
    def big_b(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate B(x) = int_0^x b/a."""

    def g(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate the generator g(x), with g' = 1/a."""
        raise self._no_generator()

    def dg(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate g'(x)."""
        raise self._no_generator()

    def d2g(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate g''(x)."""
        raise self._no_generator()

    def d3g(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Evaluate g'''(x)."""
        raise self._no_generator()

    def mass(self: "Profile", x: npt.ArrayLike) -> FloatArray:
        """Position-dependent mass M(x) = a(x)^-2."""
        return 1.0 / self.a(x) ** 2

    def check_domain(self: "Profile", x: npt.ArrayLike) -> None:
        """Validate that the profile is positive and representable at the points `x`.

        Args:
            x (npt.ArrayLike): Points to check.

        Raises:
            RangeError: If a^2 or |b| exceeds the supported range or is not finite.
            PositivityViolationError: If a(x) <= 0 somewhere.
        """
        points = _as_array(x)
        with np.errstate(over="ignore", invalid="ignore"):
            a_values = self.a(points)
            b_values = self.b(points)
            limit = settings.RANGE_LIMIT
            overflow = ~np.isfinite(a_values) | ~np.isfinite(b_values)
            overflow |= (a_values**2 > limit) | (np.abs(b_values) > limit)
        if np.any(overflow):
            worst = float(np.atleast_1d(points)[np.argmax(np.atleast_1d(overflow))])
            error_message = (
                f"Profile {self.family} exceeds the range limit {limit:g} at x = {worst:g}."
            )
            raise RangeError(error_message)
        if np.any(a_values <= 0.0):
            worst = float(np.atleast_1d(points)[np.argmin(np.atleast_1d(a_values))])
            error_message = f"Profile {self.family} has a(x) <= 0 at x = {worst:g}."
            raise PositivityViolationError(error_message)

    def parameters(self: "Profile") -> dict[str, float | str]:
        """Family parameters as a flat mapping, for reports."""
        return self.model_dump(exclude={"has_generator"})

    def _no_generator(self: "Profile") -> InvalidParameterError:
        return InvalidParameterError(f"Profile family {self.family} defines no generator g.")


class HarmonicProfile(Profile):
    """Constant a = 1/sqrt(2), linear b = x/sqrt(2): the original Swanson model."""

    family: Literal["harmonic"] = "harmonic"
    has_generator: bool = Field(default=True, exclude=True)

    def a(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return np.full_like(_as_array(x), 1.0 / _SQRT2)

    def da(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return np.zeros_like(_as_array(x))

    def d2a(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return np.zeros_like(_as_array(x))

    def b(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return _as_array(x) / _SQRT2

    def db(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return np.full_like(_as_array(x), 1.0 / _SQRT2)

    def big_b(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return 0.5 * _as_array(x) ** 2

    def g(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return _SQRT2 * _as_array(x)

    def dg(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return np.full_like(_as_array(x), _SQRT2)

    def d2g(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return np.zeros_like(_as_array(x))

    def d3g(self: "HarmonicProfile", x: npt.ArrayLike) -> FloatArray:
        return np.zeros_like(_as_array(x))


class SolitonicProfile(Profile):
    """a = cosh qx, b = kappa q sinh qx, i.e. the mass background M = sech^2 qx.

    Attributes:
        q (float): Inverse length, strictly positive.
        kappa (float): Dimensionless strength of b.
    """

    family: Literal["solitonic"] = "solitonic"
    has_generator: bool = Field(default=True, exclude=True)
    q: float = Field(gt=0, examples=[1.0])
    kappa: float = Field(examples=[2.0])

    @property
    def length_scale(self: "SolitonicProfile") -> float:
        return self.q

    def a(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        with np.errstate(over="ignore"):
            return np.cosh(self.q * _as_array(x))

    def da(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        with np.errstate(over="ignore"):
            return self.q * np.sinh(self.q * _as_array(x))

    def d2a(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        return self.q**2 * self.a(x)

    def b(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        return self.kappa * self.da(x)

    def db(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        return self.kappa * self.d2a(x)

    def big_b(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        # ln cosh y without overflow for large |y|
        y = self.q * _as_array(x)
        return self.kappa * (np.logaddexp(y, -y) - math.log(2.0))

    def g(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        with np.errstate(over="ignore"):
            return (2.0 / self.q) * np.arctan(np.exp(self.q * _as_array(x)))

    def dg(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        return 1.0 / self.a(x)

    def d2g(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        y = self.q * _as_array(x)
        return -self.q * np.tanh(y) / self.a(x)

    def d3g(self: "SolitonicProfile", x: npt.ArrayLike) -> FloatArray:
        y = self.q * _as_array(x)
        sech = 1.0 / self.a(x)
        return self.q**2 * sech * (np.tanh(y) ** 2 - sech**2)


class ExponentialProfile(Profile):
    """Exponential generator g = -e^(-px)/p, so a = e^(px) and b = 0.

    Its mass background is M = e^(-2px). Used as the generator of the Morse-like
    family through `canonical_b_from_g`.
    """

    family: Literal["exponential"] = "exponential"
    has_generator: bool = Field(default=True, exclude=True)
    p: float = Field(examples=[1.0])

    @property
    def length_scale(self: "ExponentialProfile") -> float:
        return abs(self.p)

    def a(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        with np.errstate(over="ignore"):
            return np.exp(self.p * _as_array(x))

    def da(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        return self.p * self.a(x)

    def d2a(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        return self.p**2 * self.a(x)

    def b(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        return np.zeros_like(_as_array(x))

    def db(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        return np.zeros_like(_as_array(x))

    def big_b(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        return np.zeros_like(_as_array(x))

    def g(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        return -self.dg(x) / self.p

    def dg(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        with np.errstate(over="ignore"):
            return np.exp(-self.p * _as_array(x))

    def d2g(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        return -self.p * self.dg(x)

    def d3g(self: "ExponentialProfile", x: npt.ArrayLike) -> FloatArray:
        return self.p**2 * self.dg(x)


class CanonicalProfile(Profile):
    """Profile a = 1/g' with b chosen so that [eta, eta^dagger] = 1.

    b = -g''/(2g'^2) + g/2 + mu, which makes 2ab' - aa'' equal to one identically.

    Attributes:
        generator (Profile): Any profile exposing g, g', g'', g'''.
        mu (float): Integration constant of b.
    """

    family: Literal["morse", "canonical-from-g"] = "canonical-from-g"
    has_generator: bool = Field(default=True, exclude=True)
    generator: SerializeAsAny[Profile]
    mu: float = Field(default=0.0, examples=[0.0])

    @property
    def length_scale(self: "CanonicalProfile") -> float:
        return self.generator.length_scale

    @property
    def gauge_offset(self: "CanonicalProfile") -> float:
        return float((0.5 * self.generator.g(0.0) + self.mu) ** 2)

    def _dg(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        values = self.generator.dg(x)
        if np.any(values == 0.0):
            error_message = f"Generator derivative g' vanishes for profile {self.family}."
            raise SingularGeneratorError(error_message)
        return values

    def a(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        return 1.0 / self._dg(x)

    def da(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        return -self.generator.d2g(x) / self._dg(x) ** 2

    def d2a(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        dg = self._dg(x)
        d2g = self.generator.d2g(x)
        return -self.generator.d3g(x) / dg**2 + 2.0 * d2g**2 / dg**3

    def b(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        dg = self._dg(x)
        return -self.generator.d2g(x) / (2.0 * dg**2) + 0.5 * self.generator.g(x) + self.mu

    def db(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        dg = self._dg(x)
        d2g = self.generator.d2g(x)
        return -self.generator.d3g(x) / (2.0 * dg**2) + d2g**2 / dg**3 + 0.5 * dg

    def big_b(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        g0 = float(self.generator.g(0.0))
        dg0 = float(self._dg(0.0))
        shifted = 0.5 * self.generator.g(x) + self.mu
        return (
            -0.5 * np.log(self._dg(x) / dg0) + shifted**2 - (0.5 * g0 + self.mu) ** 2
        )

    def g(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        return self.generator.g(x)

    def dg(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        return self._dg(x)

    def d2g(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        return self.generator.d2g(x)

    def d3g(self: "CanonicalProfile", x: npt.ArrayLike) -> FloatArray:
        return self.generator.d3g(x)

    def parameters(self: "CanonicalProfile") -> dict[str, float | str]:
        flat: dict[str, float | str] = {"family": self.family, "mu": self.mu}
        for key, value in self.generator.parameters().items():
            flat[f"generator_{key}"] = value
        return flat


class ExpressionProfile(Profile):
    """Custom profile given as closed-form expressions for a(x) and b(x).

    Derivatives are symbolic. g' = 1/a and its derivatives are symbolic as well,
    while g and B are integrated numerically from the origin.

    Attributes:
        expr_a (str): Expression for a(x).
        expr_b (str): Expression for b(x).
    """

    family: Literal["custom"] = "custom"
    has_generator: bool = Field(default=True, exclude=True)
    expr_a: str = Field(min_length=1, examples=["cosh(x)"])
    expr_b: str = Field(default="0", min_length=1, examples=["2*sinh(x)"])

    _a: list[ScalarFunction] = PrivateAttr(default_factory=list)
    _b: list[ScalarFunction] = PrivateAttr(default_factory=list)
    _g: list[ScalarFunction] = PrivateAttr(default_factory=list)
    _b_over_a: ScalarFunction | None = PrivateAttr(default=None)

    def model_post_init(self: "ExpressionProfile", __context: object) -> None:
        a_expr = parse_profile_expression(self.expr_a)
        b_expr = parse_profile_expression(self.expr_b)
        self._a = [compile_expression(item) for item in derivatives(a_expr, 2)]
        self._b = [compile_expression(item) for item in derivatives(b_expr, 1)]
        self._g = [compile_expression(item) for item in derivatives(1 / a_expr, 2)]
        self._b_over_a = compile_expression(sp.simplify(b_expr / a_expr))
        logger.debug("Compiled custom profile a=%s, b=%s", self.expr_a, self.expr_b)

    def a(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        return self._a[0](x)

    def da(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        return self._a[1](x)

    def d2a(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        return self._a[2](x)

    def b(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        return self._b[0](x)

    def db(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        return self._b[1](x)

    def big_b(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        integrand = self._b_over_a
        return integrate_from_origin(lambda t: float(integrand(t)), x)

    def g(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        integrand = self._g[0]
        return integrate_from_origin(lambda t: float(integrand(t)), x)

    def dg(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        return self._g[0](x)

    def d2g(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        return self._g[1](x)

    def d3g(self: "ExpressionProfile", x: npt.ArrayLike) -> FloatArray:
        return self._g[2](x)


def make_solitonic(q: float, kappa: float) -> SolitonicProfile:
    """Build the solitonic profile a = cosh qx, b = kappa q sinh qx.

    Args:
        q (float): Inverse length, must be positive.
        kappa (float): Strength of b.

    Raises:
        InvalidParameterError: If q <= 0 or a parameter is not finite.

    Returns:
        SolitonicProfile: The profile.
    """
    if not (math.isfinite(q) and math.isfinite(kappa)):
        error_message = f"Solitonic parameters must be finite, got q={q}, kappa={kappa}."
        raise InvalidParameterError(error_message)
    if q <= 0:
        error_message = f"Solitonic profile requires q > 0, got q={q}."
        raise InvalidParameterError(error_message)
    return SolitonicProfile(q=q, kappa=kappa)


def make_harmonic() -> HarmonicProfile:
    """Build the harmonic profile a = 1/sqrt(2), b = x/sqrt(2)."""
    return HarmonicProfile()


def make_exponential(p: float) -> ExponentialProfile:
    """Build the exponential generator profile g = -e^(-px)/p.

    Raises:
        InvalidParameterError: If p is zero or not finite.
    """
    if p == 0 or not math.isfinite(p):
        error_message = f"Exponential generator requires a finite p != 0, got p={p}."
        raise InvalidParameterError(error_message)
    return ExponentialProfile(p=p)


def make_custom(expr_a: str, expr_b: str = "0") -> ExpressionProfile:
    """Build a custom profile from closed-form expressions in x."""
    return ExpressionProfile(expr_a=expr_a, expr_b=expr_b)


def canonical_b_from_g(g_profile: Profile, mu: float = 0.0) -> CanonicalProfile:
    """Replace b by the canonical choice restoring [eta, eta^dagger] = 1.

    Args:
        g_profile (Profile): Profile exposing a generator g with g' = 1/a.
        mu (float): Integration constant, 0 by default.

    Raises:
        InvalidParameterError: If the profile has no generator or mu is not finite.
        SingularGeneratorError: If g' vanishes at the origin.

    Returns:
        CanonicalProfile: The canonical-condition profile.
    """
    if not g_profile.has_generator:
        raise g_profile._no_generator()  # noqa: SLF001
    if not math.isfinite(mu):
        error_message = f"Integration constant mu must be finite, got mu={mu}."
        raise InvalidParameterError(error_message)
    if float(g_profile.dg(0.0)) == 0.0:
        error_message = "Generator derivative g' vanishes at the origin."
        raise SingularGeneratorError(error_message)
    family = "morse" if isinstance(g_profile, ExponentialProfile) else "canonical-from-g"
    return CanonicalProfile(family=family, generator=g_profile, mu=mu)


def make_morse(p: float, mu: float = 0.0) -> CanonicalProfile:
    """Morse-like family: canonical b over the exponential generator g = -e^(-px)/p."""
    return canonical_b_from_g(make_exponential(p), mu)


def commutator_field(profile: Profile, x: npt.ArrayLike) -> FloatArray:
    """Generalized quantum condition [eta, eta^dagger] = 2ab' - aa''."""
    a = profile.a(x)
    return 2.0 * a * profile.db(x) - a * profile.d2a(x)


def pt_symmetry_predicate(
    profile: Profile,
    params: "ModelParams",
    sample_points: Sequence[float] | npt.ArrayLike,
) -> bool:
    """Check parity invariance of the coefficients of the non-Hermitian operator.

    The kinetic coefficient a^2 and c2 must be even and the drift
    (omega~ a a' + c1) odd at every sample point, within the parity tolerance.

    Args:
        profile (Profile): Ladder-operator profile.
        params (ModelParams): Swanson parameters.
        sample_points (Sequence[float] | npt.ArrayLike): Points symmetric about 0.

    Raises:
        InvalidParameterError: If the points are not symmetric about the origin.
        PositivityViolationError: If a(x) <= 0 at a sample point.

    Returns:
        bool: True when all three parity relations hold.
    """
    from src.domain.model import c2, drift  # noqa: PLC0415

    points = np.sort(_as_array(sample_points).ravel())
    if points.size == 0 or not np.allclose(points, -points[::-1], rtol=0.0, atol=1e-12):
        error_message = "PT-symmetry sample points must be symmetric about 0."
        raise InvalidParameterError(error_message)
    profile.check_domain(points)

    tolerance = settings.PARITY_TOL
    mirrored = -points

    def _close(left: FloatArray, right: FloatArray) -> bool:
        scale = np.maximum(1.0, np.maximum(np.abs(left), np.abs(right)))
        return bool(np.all(np.abs(left - right) <= tolerance * scale))

    kinetic_even = _close(profile.a(points) ** 2, profile.a(mirrored) ** 2)
    drift_odd = _close(drift(profile, params, points), -drift(profile, params, mirrored))
    potential_even = _close(c2(profile, params, points), c2(profile, params, mirrored))
    logger.debug(
        "Parity of %s: kinetic even=%s, drift odd=%s, c2 even=%s",
        profile.family,
        kinetic_even,
        drift_odd,
        potential_even,
    )
    return kinetic_even and drift_odd and potential_even
