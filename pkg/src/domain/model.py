"""Swanson parameters and the coefficient fields derived from a profile.

With eta = a d/dx + b, the non-Hermitian operator reads

    H~ = -omega~ d/dx a^2 d/dx + (omega~ a a' + c1) d/dx + c2,

and the gauge weight w (rho~ = 1/w) removes its first-derivative term, leaving
the Sturm-Liouville form h~ = -omega~ d/dx a^2 d/dx + V_eff.

All evaluators are vectorized over x. Parameters enter through
omega~ = omega - alpha - beta, delta = alpha - beta and sigma = alpha + beta.
"""

import math

import numpy as np
import numpy.typing as npt
import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.logger import logger
from src.domain.exceptions import InvalidParameterError
from src.domain.profiles import FloatArray, Profile, integrate_from_origin


class ModelParams(BaseModel):
    """Swanson parameters (omega, alpha, beta).

    Attributes:
        omega (float): Oscillator frequency.
        alpha (float): Coefficient of eta^2.
        beta (float): Coefficient of eta^dagger^2.
    """

    model_config = ConfigDict(frozen=True)

    omega: float = Field(examples=[2.0])
    alpha: float = Field(default=0.0, examples=[0.4])
    beta: float = Field(default=0.0, examples=[0.2])

    @model_validator(mode="after")
    def check_omega_tilde(self: "ModelParams") -> "ModelParams":
        """Validates that omega~ = omega - alpha - beta is positive.

        Raises:
            InvalidParameterError: If a parameter is not finite or omega~ <= 0.

        Returns:
            ModelParams: The validated parameters.
        """
        if not all(math.isfinite(value) for value in (self.omega, self.alpha, self.beta)):
            error_message = "Model parameters omega, alpha, beta must be finite."
            raise InvalidParameterError(error_message)
        if self.omega_tilde <= 0:
            error_message = (
                f"omega~ = omega - alpha - beta = {self.omega_tilde:g} must be positive"
                " (it is appropriate to assume omega~ > 0 for a Schroedinger form)."
            )
            raise InvalidParameterError(error_message)
        return self

    @property
    def omega_tilde(self: "ModelParams") -> float:
        """omega~ = omega - alpha - beta."""
        return self.omega - self.alpha - self.beta

    @property
    def delta(self: "ModelParams") -> float:
        """alpha - beta, the exponent carried by the metric."""
        return self.alpha - self.beta

    @property
    def sigma(self: "ModelParams") -> float:
        """alpha + beta."""
        return self.alpha + self.beta

    @property
    def is_balanced(self: "ModelParams") -> bool:
        """True when alpha == beta, i.e. the operator is already Hermitian."""
        return self.alpha == self.beta

    def swapped(self: "ModelParams") -> "ModelParams":
        """Parameters with alpha and beta exchanged."""
        return ModelParams(omega=self.omega, alpha=self.beta, beta=self.alpha)

    def scaled(self: "ModelParams") -> tuple[float, float]:
        """(alpha/omega~, beta/omega~), the parameters of the unit-omega~ model."""
        return self.alpha / self.omega_tilde, self.beta / self.omega_tilde


class CoefficientField(BaseModel):
    """Coefficient fields of H~ and h~ sampled on a set of points."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    a: np.ndarray
    b: np.ndarray
    kinetic: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    veff: np.ndarray
    rho_tilde: np.ndarray
    zeta_plus: np.ndarray


class MetricData(BaseModel):
    """Gauge weight, similarity map and metric sampled on a set of points."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    mass: np.ndarray
    w: np.ndarray
    rho_tilde: np.ndarray
    zeta_plus: np.ndarray
    zeta: np.ndarray
    jones_rho: np.ndarray | None = None


def kinetic(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Kinetic coefficient omega~ a^2."""
    return params.omega_tilde * profile.a(x) ** 2


def c1(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """c1 = -omega~ a a' + (alpha - beta) a (2b - a')."""
    a = profile.a(x)
    da = profile.da(x)
    return -params.omega_tilde * a * da + params.delta * a * (2.0 * profile.b(x) - da)


def drift(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """First-derivative coefficient omega~ a a' + c1 = (alpha - beta) a (2b - a')."""
    return params.delta * profile.a(x) * (2.0 * profile.b(x) - profile.da(x))


def c2(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Multiplicative coefficient c2 of H~."""
    a, da, d2a = profile.a(x), profile.da(x), profile.d2a(x)
    b, db = profile.b(x), profile.db(x)
    omega_tilde = params.omega_tilde
    return (
        omega_tilde * (b**2 - a * db - da * b)
        + params.alpha * b * (2.0 * b - da)
        + params.beta * ((b - da) * (2.0 * b - da) - a * (2.0 * db - d2a))
        + 0.5 * (omega_tilde + params.sigma)
    )


def gauge_log_derivative(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Gauge log-derivative s = w'/w = (alpha - beta)(2b - a')/(2 omega~ a)."""
    numerator = params.delta * (2.0 * profile.b(x) - profile.da(x))
    return numerator / (2.0 * params.omega_tilde * profile.a(x))


def gauge_log_derivative_prime(
    profile: Profile,
    params: ModelParams,
    x: npt.ArrayLike,
) -> FloatArray:
    """Analytic derivative s' of the gauge log-derivative."""
    a, da, d2a = profile.a(x), profile.da(x), profile.d2a(x)
    b, db = profile.b(x), profile.db(x)
    numerator = (2.0 * db - d2a) * a - (2.0 * b - da) * da
    return params.delta * numerator / (2.0 * params.omega_tilde * a**2)


def gauge_weight(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Gauge weight w = exp(int_0^x s), so that rho~ = 1/w.

    The integral is evaluated by adaptive quadrature of the log-derivative; the
    closed-form constant of canonical profiles is added so that w is the exact
    reciprocal of `rho_tilde`.

    Args:
        profile (Profile): Ladder-operator profile.
        params (ModelParams): Swanson parameters.
        x (npt.ArrayLike): Evaluation points.

    Raises:
        PositivityViolationError: If a(x) <= 0 at an evaluation point.

    Returns:
        FloatArray: w(x).
    """
    points = np.asarray(x, dtype=np.float64)
    if params.is_balanced:
        return np.ones_like(points)
    profile.check_domain(points)
    exponent = integrate_from_origin(
        lambda t: float(gauge_log_derivative(profile, params, t)),
        points,
    )
    offset = params.delta * profile.gauge_offset / params.omega_tilde
    return np.exp(exponent + offset)


def rho_tilde(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Similarity map rho~ = (a/a(0))^(delta/(2 omega~)) exp(-delta (B + nu)/omega~).

    nu is the closed-form gauge constant of the profile, zero for every family
    except the canonical-condition ones.

    Raises:
        PositivityViolationError: If a(x) <= 0 at an evaluation point.
    """
    points = np.asarray(x, dtype=np.float64)
    if params.is_balanced:
        return np.ones_like(points)
    profile.check_domain(points)
    ratio = params.delta / params.omega_tilde
    a0 = float(profile.a(0.0))
    log_rho = 0.5 * ratio * np.log(profile.a(points) / a0) - ratio * (
        profile.big_b(points) + profile.gauge_offset
    )
    return np.exp(log_rho)


def zeta_plus(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Positive metric zeta+ = rho~^2."""
    return rho_tilde(profile, params, x) ** 2


def zeta(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Metric zeta = rho~_(beta,alpha)^-1 rho~_(alpha,beta)."""
    return rho_tilde(profile, params, x) / rho_tilde(profile, params.swapped(), x)


def veff_unit(  # noqa: PLR0913
    a: FloatArray | sp.Expr,
    da: FloatArray | sp.Expr,
    d2a: FloatArray | sp.Expr,
    b: FloatArray | sp.Expr,
    db: FloatArray | sp.Expr,
    alpha: float | sp.Expr,
    beta: float | sp.Expr,
) -> FloatArray | sp.Expr:
    """Effective potential of the unit-omega~ model in terms of profile values.

    Written with plain arithmetic so the same expression evaluates numpy arrays
    and sympy expressions alike.
    """
    sigma = alpha + beta
    delta = alpha - beta
    strength = 1 + 2 * sigma + delta**2
    return (
        sigma / 2 * a * d2a
        + (sigma / 2 + delta**2 / 4) * da**2
        - strength * da * b
        + strength * b**2
        - (sigma + 1) * a * db
        + (sigma + 1) / 2
    )


def v_eff_closed_form(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Closed-form V_eff, extended to any omega~ as omega~ V_unit(alpha/omega~, beta/omega~)."""
    alpha, beta = params.scaled()
    return params.omega_tilde * veff_unit(
        profile.a(x),
        profile.da(x),
        profile.d2a(x),
        profile.b(x),
        profile.db(x),
        alpha,
        beta,
    )


def v_eff_general(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Gauge form V_eff = -omega~ a^2 (w''/w) + (c1 - omega~ a a')(w'/w) + c2."""
    s = gauge_log_derivative(profile, params, x)
    ds = gauge_log_derivative_prime(profile, params, x)
    a, da = profile.a(x), profile.da(x)
    omega_tilde = params.omega_tilde
    return (
        -omega_tilde * a**2 * (ds + s**2)
        + (c1(profile, params, x) - omega_tilde * a * da) * s
        + c2(profile, params, x)
    )


def v_eff(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Effective potential of the Hermitian equivalent h~.

    Uses the closed form when omega~ == 1 and the gauge form otherwise.
    """
    if params.omega_tilde == 1.0:
        return v_eff_closed_form(profile, params, x)
    return v_eff_general(profile, params, x)


def sample_coefficients(
    profile: Profile,
    params: ModelParams,
    x: npt.ArrayLike,
) -> CoefficientField:
    """Sample every coefficient field on the points `x`.

    Raises:
        PositivityViolationError: If a(x) <= 0 at a point.
        RangeError: If the profile overflows at a point.
    """
    points = np.asarray(x, dtype=np.float64)
    profile.check_domain(points)
    rho = rho_tilde(profile, params, points)
    logger.debug("Sampled coefficients of %s on %d points", profile.family, points.size)
    return CoefficientField(
        x=points,
        a=profile.a(points),
        b=profile.b(points),
        kinetic=kinetic(profile, params, points),
        c1=c1(profile, params, points),
        c2=c2(profile, params, points),
        veff=v_eff(profile, params, points),
        rho_tilde=rho,
        zeta_plus=rho**2,
    )


def sample_metric(profile: Profile, params: ModelParams, x: npt.ArrayLike) -> MetricData:
    """Sample w, rho~, zeta+ and zeta on the points `x`.

    The Jones closed form of rho is added for the harmonic family.
    """
    from src.domain.closedform import jones_rho  # noqa: PLC0415

    points = np.asarray(x, dtype=np.float64)
    profile.check_domain(points)
    rho = rho_tilde(profile, params, points)
    return MetricData(
        x=points,
        mass=profile.mass(points),
        w=gauge_weight(profile, params, points),
        rho_tilde=rho,
        zeta_plus=rho**2,
        zeta=zeta(profile, params, points),
        jones_rho=jones_rho(params, points) if profile.family == "harmonic" else None,
    )
