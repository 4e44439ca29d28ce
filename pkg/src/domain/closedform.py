"""Analytic oracles for the exactly solvable families and the factorization of h~.

The harmonic (Jones) case, the solitonic case with Gegenbauer bound states and
the Morse-like case are stated for unit omega~ and extended to any omega~ > 0
by the scaling H~(omega, alpha, beta) = omega~ H~(1, alpha/omega~, beta/omega~).
"""

import math
from functools import lru_cache
from typing import Literal

import numpy as np
import numpy.typing as npt
import sympy as sp
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import eval_hermite, poch

from src.core.config import settings
from src.core.logger import logger
from src.domain.exceptions import (
    ComplexLambdaError,
    InvalidParameterError,
    NoRealSpectrumError,
    NotFactorizableError,
    OracleMismatchError,
    SingularGeneratorError,
)
from src.domain.model import ModelParams, rho_tilde, veff_unit
from src.domain.profiles import FloatArray, Profile, SolitonicProfile

# Harmonic (Jones) case


def harmonic_spectrum(params: ModelParams, n: int) -> float:
    """E_n = (n + 1/2) sqrt(omega^2 - 4 alpha beta) of the harmonic Swanson model.

    Args:
        params (ModelParams): Swanson parameters.
        n (int): Level index, n >= 0.

    Raises:
        InvalidParameterError: If n < 0.
        NoRealSpectrumError: If omega^2 <= 4 alpha beta.

    Returns:
        float: The energy.
    """
    if n < 0:
        error_message = f"Level index must be nonnegative, got n={n}."
        raise InvalidParameterError(error_message)
    discriminant = params.omega**2 - 4.0 * params.alpha * params.beta
    if discriminant <= 0:
        error_message = f"omega^2 - 4 alpha beta = {discriminant:g} <= 0: no real spectrum."
        raise NoRealSpectrumError(error_message)
    return (n + 0.5) * math.sqrt(discriminant)


def jones_rho(params: ModelParams, x: npt.ArrayLike) -> FloatArray:
    """Similarity map of the harmonic case, exp(-(alpha - beta) x^2 / (2 omega~))."""
    points = np.asarray(x, dtype=np.float64)
    return np.exp(-0.5 * params.delta * points**2 / params.omega_tilde)


def harmonic_wavefunction(params: ModelParams, n: int, x: npt.ArrayLike) -> FloatArray:
    """Unnormalized eigenfunction H_n(gamma x) exp(-gamma^2 x^2 / 2) of the Hermitian h~.

    gamma^2 = sqrt(omega^2 - 4 alpha beta) / omega~ sets the oscillator length.

    Raises:
        NoRealSpectrumError: If omega^2 <= 4 alpha beta.
    """
    energy_quantum = harmonic_spectrum(params, 0) * 2.0
    gamma = math.sqrt(energy_quantum / params.omega_tilde)
    scaled = gamma * np.asarray(x, dtype=np.float64)
    return eval_hermite(n, scaled) * np.exp(-0.5 * scaled**2)


# Solitonic case


_C, _S = sp.symbols("C S", real=True)
_Q, _KAPPA, _ALPHA, _BETA = sp.symbols("q kappa alpha beta", real=True)


def _delta_expression(kappa: object, alpha: object, beta: object) -> object:
    sigma = alpha + beta
    delta = alpha - beta
    half = sp.Rational(1, 2) if isinstance(kappa, sp.Basic) else 0.5
    return (kappa - 1) ** 2 + (kappa - 1) * (2 * kappa - 1) * sigma + (kappa - half) ** 2 * delta**2


def solitonic_delta(kappa: float, alpha: float, beta: float, omega_tilde: float = 1.0) -> float:
    """Delta of the solitonic family for the rescaled parameters alpha/omega~, beta/omega~."""
    return float(_delta_expression(kappa, alpha / omega_tilde, beta / omega_tilde))


@lru_cache(maxsize=1)
def _solitonic_expansion() -> tuple[sp.Expr, sp.Expr, sp.Expr]:
    """Expand V_eff for a = cosh qx, b = kappa q sinh qx as a polynomial in cosh qx.

    Returns the cosh^2 coefficient, the cosh^1 coefficient and the constant term
    as expressions in (q, kappa, alpha, beta).
    """
    expression = veff_unit(
        _C,
        _Q * _S,
        _Q**2 * _C,
        _KAPPA * _Q * _S,
        _KAPPA * _Q**2 * _C,
        _ALPHA,
        _BETA,
    )
    expression = sp.expand(sp.expand(expression).subs(_S**2, _C**2 - 1))
    if expression.has(_S):
        error_message = "Solitonic V_eff expansion kept odd powers of sinh."
        raise OracleMismatchError(error_message)
    polynomial = sp.Poly(expression, _C)
    if polynomial.degree() > 2:  # noqa: PLR2004
        error_message = f"Solitonic V_eff expansion has degree {polynomial.degree()} in cosh."
        raise OracleMismatchError(error_message)
    quadratic = polynomial.coeff_monomial(_C**2)
    linear = polynomial.coeff_monomial(_C)
    constant = polynomial.coeff_monomial(1)
    expected = _Q**2 * (_delta_expression(_KAPPA, _ALPHA, _BETA) - 1)
    if sp.expand(quadratic - expected) != 0:
        error_message = "Expanded cosh^2 coefficient differs from q^2 (Delta - 1)."
        raise OracleMismatchError(error_message)
    logger.debug("Solitonic expansion constant term: %s", constant)
    return quadratic, linear, constant


@lru_cache(maxsize=1)
def _compiled_expansion() -> tuple[object, object, object]:
    symbols = (_Q, _KAPPA, _ALPHA, _BETA)
    return tuple(sp.lambdify(symbols, term, modules="math") for term in _solitonic_expansion())


def solitonic_expansion(q: float, kappa: float, alpha: float, beta: float) -> tuple[float, float]:
    """Evaluate the symbolic expansion of the unit-omega~ solitonic V_eff.

    Args:
        q (float): Inverse length.
        kappa (float): Strength of b.
        alpha (float): alpha/omega~.
        beta (float): beta/omega~.

    Returns:
        tuple[float, float]: (cosh^2 coefficient, constant term V0).
    """
    quadratic, linear, constant = _compiled_expansion()
    if float(linear(q, kappa, alpha, beta)) != 0.0:
        error_message = "Solitonic V_eff expansion has a term linear in cosh."
        raise OracleMismatchError(error_message)
    return float(quadratic(q, kappa, alpha, beta)), float(constant(q, kappa, alpha, beta))


def solitonic_v0(q: float, kappa: float, alpha: float, beta: float) -> float:
    """Constant V0 = q^2 [-sigma/2 - delta^2/4 + K kappa (1 - kappa)] + (sigma + 1)/2.

    K = 1 + 2 sigma + delta^2, for the unit-omega~ solitonic model.
    """
    sigma = alpha + beta
    delta = alpha - beta
    strength = 1.0 + 2.0 * sigma + delta**2
    return q**2 * (-0.5 * sigma - 0.25 * delta**2 + strength * kappa * (1.0 - kappa)) + 0.5 * (
        sigma + 1.0
    )


class SolitonicClosedForm(BaseModel):
    """Closed-form data of the solitonic family.

    Energies and V0 carry the omega~ factor; Delta and lambda are those of the
    unit-omega~ model with rescaled alpha, beta.
    """

    model_config = ConfigDict(frozen=True)

    q: float = Field(gt=0, examples=[1.0])
    kappa: float = Field(gt=0.5, examples=[2.0])
    alpha: float = Field(examples=[0.1])
    beta: float = Field(examples=[0.0])
    omega_tilde: float = Field(default=1.0, gt=0)
    big_delta: float = Field(gt=0, examples=[1.3225])
    lam: float = Field(examples=[1.65])
    v0: float = Field(examples=[-1.9225])
    cosh2_coefficient: float = Field(examples=[0.3225])

    def energy(self: "SolitonicClosedForm", n: int) -> float:
        """E_n = omega~ q^2 (n + lambda - 1/2)(n + lambda + 1/2) + V0."""
        return solitonic_energy(self, n)


def solitonic_data(  # noqa: PLR0913
    q: float,
    kappa: float,
    alpha: float,
    beta: float,
    *,
    omega_tilde: float = 1.0,
) -> SolitonicClosedForm:
    """Delta, lambda and V0 of the solitonic family.

    V0 and the cosh^2 coefficient come from the symbolic expansion and are
    checked against their closed forms.

    Args:
        q (float): Inverse length, q > 0.
        kappa (float): Strength of b, kappa > 1/2.
        alpha (float): alpha.
        beta (float): beta.
        omega_tilde (float): omega - alpha - beta, 1 by default.

    Raises:
        InvalidParameterError: If q <= 0, kappa <= 1/2 or omega~ <= 0.
        ComplexLambdaError: If Delta <= 0.
        OracleMismatchError: If the expansion disagrees with the closed forms.

    Returns:
        SolitonicClosedForm: The closed-form data.
    """
    if q <= 0:
        error_message = f"Solitonic closed form requires q > 0, got q={q}."
        raise InvalidParameterError(error_message)
    if kappa <= 0.5:  # noqa: PLR2004
        error_message = f"Solitonic closed form requires kappa > 1/2, got kappa={kappa}."
        raise InvalidParameterError(error_message)
    if omega_tilde <= 0:
        error_message = f"omega~ must be positive, got {omega_tilde}."
        raise InvalidParameterError(error_message)

    unit_alpha, unit_beta = alpha / omega_tilde, beta / omega_tilde
    delta = solitonic_delta(kappa, alpha, beta, omega_tilde)
    if delta <= 0:
        error_message = f"Delta = {delta:g} <= 0: lambda = 1/2 + sqrt(Delta) is not real."
        raise ComplexLambdaError(error_message)
    lam = 0.5 + math.sqrt(delta)

    quadratic, constant = solitonic_expansion(q, kappa, unit_alpha, unit_beta)
    expected_constant = solitonic_v0(q, kappa, unit_alpha, unit_beta)
    scale = max(1.0, abs(expected_constant), abs(quadratic))
    if abs(constant - expected_constant) > 1e-12 * scale:
        error_message = f"Expanded V0 {constant!r} differs from closed form {expected_constant!r}."
        raise OracleMismatchError(error_message)
    if abs(quadratic - q**2 * (delta - 1.0)) > 1e-12 * scale:
        error_message = f"Expanded cosh^2 coefficient {quadratic!r} differs from q^2 (Delta - 1)."
        raise OracleMismatchError(error_message)

    return SolitonicClosedForm(
        q=q,
        kappa=kappa,
        alpha=alpha,
        beta=beta,
        omega_tilde=omega_tilde,
        big_delta=delta,
        lam=lam,
        v0=omega_tilde * constant,
        cosh2_coefficient=omega_tilde * quadratic,
    )


def solitonic_energy(data: SolitonicClosedForm, n: int) -> float:
    """E_n = omega~ q^2 (n + lambda - 1/2)(n + lambda + 1/2) + V0."""
    if n < 0:
        error_message = f"Level index must be nonnegative, got n={n}."
        raise InvalidParameterError(error_message)
    return data.omega_tilde * data.q**2 * (n + data.lam - 0.5) * (n + data.lam + 0.5) + data.v0


def gegenbauer(n: int, lam: float, t: npt.ArrayLike) -> FloatArray:
    """Gegenbauer polynomial C_n^(lambda)(t) by forward three-term recurrence.

    Args:
        n (int): Degree, 0 <= n <= GEGENBAUER_MAX_DEGREE.
        lam (float): Parameter lambda > 0.
        t (npt.ArrayLike): Arguments in [-1, 1].

    Raises:
        InvalidParameterError: If n or lambda is out of range.

    Returns:
        FloatArray: C_n^(lambda)(t).
    """
    if not 0 <= n <= settings.GEGENBAUER_MAX_DEGREE:
        error_message = (
            f"Gegenbauer degree must be in [0, {settings.GEGENBAUER_MAX_DEGREE}], got n={n}."
        )
        raise InvalidParameterError(error_message)
    if lam <= 0:
        error_message = f"Gegenbauer parameter must be positive, got lambda={lam}."
        raise InvalidParameterError(error_message)
    t = np.asarray(t, dtype=np.float64)
    previous = np.ones_like(t)
    if n == 0:
        return previous
    current = 2.0 * lam * t
    for degree in range(2, n + 1):
        previous, current = current, (
            2.0 * (degree + lam - 1.0) * t * current - (degree + 2.0 * lam - 2.0) * previous
        ) / degree
    return current


def gegenbauer_series(n: int, lam: float, t: npt.ArrayLike) -> FloatArray:
    """Explicit series sum_k (-1)^k (lambda)_(n-k) / (k! (n-2k)!) (2t)^(n-2k)."""
    t = np.asarray(t, dtype=np.float64)
    total = np.zeros_like(t)
    for k in range(n // 2 + 1):
        coefficient = (-1) ** k * poch(lam, n - k) / (math.factorial(k) * math.factorial(n - 2 * k))
        total = total + coefficient * (2.0 * t) ** (n - 2 * k)
    return total


def solitonic_wavefunction(data: SolitonicClosedForm, n: int, x: npt.ArrayLike) -> FloatArray:
    """Unnormalized chi_n = (sech qx)^(lambda + 1/2) C_n^(lambda)(tanh qx)."""
    y = data.q * np.asarray(x, dtype=np.float64)
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(y)
    return sech ** (data.lam + 0.5) * gegenbauer(n, data.lam, np.tanh(y))


def transformed_wavefunction(
    data: SolitonicClosedForm,
    profile: Profile,
    params: ModelParams,
    n: int,
    x: npt.ArrayLike,
) -> FloatArray:
    """Eigenfunction phi_n = rho~^-1 chi_n of the non-Hermitian H~."""
    return solitonic_wavefunction(data, n, x) / rho_tilde(profile, params, x)


# Morse-like case and canonical generators


def _strength(alpha: float, beta: float) -> float:
    return 1.0 + 2.0 * (alpha + beta) + (alpha - beta) ** 2


def morse_veff(  # noqa: PLR0913
    p: float,
    mu: float,
    alpha: float,
    beta: float,
    x: npt.ArrayLike,
    *,
    omega_tilde: float = 1.0,
) -> FloatArray:
    """V_eff = -3/4 p^2 e^(2px) + K (-e^(-px)/(2p) + mu)^2, scaled by omega~.

    Raises:
        InvalidParameterError: If p == 0.
    """
    if p == 0:
        error_message = "Morse-like family requires p != 0."
        raise InvalidParameterError(error_message)
    points = np.asarray(x, dtype=np.float64)
    shifted = -np.exp(-p * points) / (2.0 * p) + mu
    strength = _strength(alpha / omega_tilde, beta / omega_tilde)
    return omega_tilde * (-0.75 * p**2 * np.exp(2.0 * p * points) + strength * shifted**2)


def morse_rho(  # noqa: PLR0913
    p: float,
    mu: float,
    alpha: float,
    beta: float,
    x: npt.ArrayLike,
    *,
    omega_tilde: float = 1.0,
) -> FloatArray:
    """rho~ = exp[-(alpha - beta)(-e^(-px)/(2p) + mu)^2 / omega~].

    Raises:
        InvalidParameterError: If p == 0.
    """
    if p == 0:
        error_message = "Morse-like family requires p != 0."
        raise InvalidParameterError(error_message)
    points = np.asarray(x, dtype=np.float64)
    shifted = -np.exp(-p * points) / (2.0 * p) + mu
    return np.exp(-(alpha - beta) * shifted**2 / omega_tilde)


def veff_from_g(  # noqa: PLR0913
    g_profile: Profile,
    mu: float,
    alpha: float,
    beta: float,
    x: npt.ArrayLike,
    *,
    omega_tilde: float = 1.0,
) -> FloatArray:
    """V_eff under the canonical condition, written through the generator g.

    V_eff = g'''/(2 g'^3) - 5/4 g''^2/g'^4 + K (g/2 + mu)^2, scaled by omega~.

    Raises:
        InvalidParameterError: If the profile defines no generator.
        SingularGeneratorError: If g' vanishes at a point.
    """
    dg = g_profile.dg(x)
    if np.any(dg == 0.0):
        error_message = "Generator derivative g' vanishes on the domain."
        raise SingularGeneratorError(error_message)
    strength = _strength(alpha / omega_tilde, beta / omega_tilde)
    return omega_tilde * (
        0.5 * g_profile.d3g(x) / dg**3
        - 1.25 * g_profile.d2g(x) ** 2 / dg**4
        + strength * (0.5 * g_profile.g(x) + mu) ** 2
    )


# Factorization


class FactorizationData(BaseModel):
    """Intertwiner eta_1 = a d/dx + b_1 with h~ = omega~ eta_1^dagger eta_1 + xi.

    Attributes:
        branch (str): Which parameter vanishes, "beta_zero" or "alpha_zero".
        d1 (float): Coefficient of b in b_1.
        d2 (float): Coefficient of a' in b_1.
        xi (float): Energy shift.
    """

    model_config = ConfigDict(frozen=True)

    branch: Literal["beta_zero", "alpha_zero"]
    d1: float
    d2: float
    xi: float
    omega_tilde: float = Field(gt=0)
    profile: Profile

    def b1(self: "FactorizationData", x: npt.ArrayLike) -> FloatArray:
        """b_1 = d1 b + d2 a'."""
        return self.d1 * self.profile.b(x) + self.d2 * self.profile.da(x)

    def db1(self: "FactorizationData", x: npt.ArrayLike) -> FloatArray:
        """b_1' = d1 b' + d2 a''."""
        return self.d1 * self.profile.db(x) + self.d2 * self.profile.d2a(x)

    def factorized_veff(self: "FactorizationData", x: npt.ArrayLike) -> FloatArray:
        """omega~ (b_1^2 - (a b_1)') + xi."""
        b1 = self.b1(x)
        derivative = self.profile.da(x) * b1 + self.profile.a(x) * self.db1(x)
        return self.omega_tilde * (b1**2 - derivative) + self.xi


def factorize(profile: Profile, params: ModelParams) -> FactorizationData:
    """Factorize h~ as omega~ eta_1^dagger eta_1 + xi when alpha or beta vanishes.

    With gamma = alpha/omega~ (beta = 0) or beta/omega~ (alpha = 0),
    b_1 = (1 + gamma) b - gamma a'/2 and xi = omega~ (1 + gamma)/2.

    Args:
        profile (Profile): Ladder-operator profile.
        params (ModelParams): Swanson parameters.

    Raises:
        NotFactorizableError: If both alpha and beta are nonzero.

    Returns:
        FactorizationData: The intertwiner data.
    """
    tolerance = settings.FACTORIZATION_ZERO_TOL
    if abs(params.beta) <= tolerance:
        branch: Literal["beta_zero", "alpha_zero"] = "beta_zero"
        gamma = params.alpha / params.omega_tilde
    elif abs(params.alpha) <= tolerance:
        branch = "alpha_zero"
        gamma = params.beta / params.omega_tilde
    else:
        error_message = (
            f"Factorization needs alpha = 0 or beta = 0, got alpha={params.alpha},"
            f" beta={params.beta}."
        )
        raise NotFactorizableError(error_message)
    return FactorizationData(
        branch=branch,
        d1=1.0 + gamma,
        d2=-0.5 * gamma,
        xi=0.5 * params.omega_tilde * (1.0 + gamma),
        omega_tilde=params.omega_tilde,
        profile=profile,
    )


# Family dispatch


def closed_form_energy(profile: Profile, params: ModelParams, n: int) -> float | None:
    """Closed-form E_n for the harmonic and solitonic families, None otherwise.

    Raises:
        NoRealSpectrumError: For a harmonic model without real spectrum.
        ComplexLambdaError: For a solitonic model with Delta <= 0.
        InvalidParameterError: For a solitonic model with kappa <= 1/2.
    """
    if profile.family == "harmonic":
        return harmonic_spectrum(params, n)
    if isinstance(profile, SolitonicProfile):
        data = solitonic_data(
            profile.q,
            profile.kappa,
            params.alpha,
            params.beta,
            omega_tilde=params.omega_tilde,
        )
        return solitonic_energy(data, n)
    return None


def closed_form_wavefunction(
    profile: Profile,
    params: ModelParams,
    n: int,
    x: npt.ArrayLike,
) -> FloatArray | None:
    """Unnormalized closed-form eigenfunction of h~, None for families without one."""
    if profile.family == "harmonic":
        return harmonic_wavefunction(params, n, x)
    if isinstance(profile, SolitonicProfile):
        data = solitonic_data(
            profile.q,
            profile.kappa,
            params.alpha,
            params.beta,
            omega_tilde=params.omega_tilde,
        )
        return solitonic_wavefunction(data, n, x)
    return None
