"""Entropic functionals of orthonormal polynomials and the integrals K1, K2, K3.

The disequilibria and Shannon entropies of a hydrogenic state separate into
closed-form constants (A, B, F), one-dimensional entropic integrals of the
orthonormal Laguerre and Gegenbauer polynomials (E1, E2) and the fourth-power
integrals K1, K2, K3:

    <rho>   = 2^(D-2) Z^D / eta^(D+2) * K1 * K2
    <gamma> = 2^(4L+8) eta^D / Z^D   * K3 * K2
    S[rho]   = A + E1[L~] / (2 eta) - D ln Z + S[Y]
    S[gamma] = F + E2[C~] + D ln Z + S[Y]
    S[Y]     = B + sum_j E2[C~_j]

K1 is integrated with the radial exponent x^(3-D) that follows from
substituting R_{n,l} into the integral of rho^2. The exponent x^(-D-5) found
in the literature does not reproduce the ground-state disequilibrium; it can
still be requested through `k1_exponent` to show exactly that.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from functools import lru_cache

import numpy as np

from ..errors import ConvergenceError
from .specfun import (
    TINY_DENSITY,
    OrthoPolySpec,
    QuadratureConfig,
    QuadratureResult,
    digamma,
    integrate,
    log_orthonormal,
    orthonormal_roots,
)
from .states import (
    AngularFactor,
    StateSpec,
    angular_factors,
    derive,
    momentum_polynomial,
    radial_polynomial,
)

logger = logging.getLogger(__name__)

_LOG_TINY = math.log(TINY_DENSITY)
_LN2 = math.log(2.0)

# Relative accuracy the entropic integrals E1 and E2 are held to.
ENTROPY_REL_TOL = 1e-9


class K1Exponent(str, Enum):
    """Power of x in the K1 integrand."""

    DERIVED = "derived"  # x^(3-D)
    PRINTED = "printed"  # x^(-D-5)

    def power(self, D: int) -> float:
        return 3.0 - D if self is K1Exponent.DERIVED else -D - 5.0


def require_converged(what: str, result: QuadratureResult) -> QuadratureResult:
    if not result.converged:
        logger.warning("%s did not converge: %s", what, result)
        raise ConvergenceError(what, result)
    logger.debug(
        "%s = %.15g (err %.2g, %d evaluations)",
        what,
        result.value,
        result.error_estimate,
        result.evaluations,
    )
    return result


def _plogp_term(log_weight: float, log_poly: float) -> float:
    """w p^2 ln p^2, zero when the density w p^2 is below TINY_DENSITY."""
    log_density = log_weight + 2.0 * log_poly
    if not math.isfinite(log_density) or log_density <= _LOG_TINY:
        return 0.0
    return math.exp(log_density) * 2.0 * log_poly


def _entropy_config(config: QuadratureConfig | None) -> QuadratureConfig:
    config = config or QuadratureConfig()
    if config.rel_tol >= ENTROPY_REL_TOL:
        return config
    return config.model_copy(update={"rel_tol": ENTROPY_REL_TOL})


@lru_cache(maxsize=4096)
def _entropy_e1(k: int, alpha: float, config: QuadratureConfig) -> QuadratureResult:
    spec = OrthoPolySpec.laguerre(k, alpha)

    def integrand(x: float) -> float:
        if x <= 0.0:
            return 0.0
        _, lp = log_orthonormal(spec, x)
        return -_plogp_term(math.log(x) + alpha * math.log(x) - x, float(lp))

    # The density x^(alpha+1) e^-x peaks at alpha + 1.
    cfg = config.with_splits(np.append(orthonormal_roots(spec), alpha + 1.0))
    return require_converged(f"E1[L~({k}, {alpha:g})]", integrate(integrand, (0.0, math.inf), cfg))


def entropy_e1(k: int, alpha: float, config: QuadratureConfig | None = None) -> QuadratureResult:
    """E1 = -int_0^inf x w(x) L~_k^2 ln L~_k^2 dx with w = x^alpha e^-x."""
    return _entropy_e1(int(k), float(alpha), _entropy_config(config))


@lru_cache(maxsize=4096)
def _entropy_e2(k: int, lam: float, config: QuadratureConfig) -> QuadratureResult:
    spec = OrthoPolySpec.gegenbauer(k, lam)

    def integrand(x: float) -> float:
        if abs(x) >= 1.0:
            return 0.0
        _, lp = log_orthonormal(spec, x)
        return -_plogp_term((lam - 0.5) * math.log1p(-x * x), float(lp))

    cfg = config.with_splits(orthonormal_roots(spec))
    return require_converged(f"E2[C~({k}, {lam:g})]", integrate(integrand, (-1.0, 1.0), cfg))


def entropy_e2(k: int, lam: float, config: QuadratureConfig | None = None) -> QuadratureResult:
    """E2 = -int_-1^1 w(x) C~_k^2 ln C~_k^2 dx with w = (1 - x^2)^(lam - 1/2)."""
    return _entropy_e2(int(k), float(lam), _entropy_config(config))


def _product(results: list[QuadratureResult], scale: float) -> QuadratureResult:
    value = scale
    rel_err = 0.0
    for r in results:
        value *= r.value
        rel_err += r.error_estimate / abs(r.value) if r.value else math.inf
    return QuadratureResult(
        value=value,
        error_estimate=abs(value) * rel_err,
        converged=all(r.converged for r in results),
        evaluations=sum(r.evaluations for r in results),
    )


def k2(spec: StateSpec, config: QuadratureConfig | None = None) -> QuadratureResult:
    """K2 = int |Y|^4 dOmega = (1/2pi) prod_j int_0^pi C~_j^4 sin^(4 mu_{j+1} + D-1-j) dtheta."""
    config = config or QuadratureConfig()
    parts = []
    for factor in angular_factors(spec):

        def integrand(theta: float, factor: AngularFactor = factor) -> float:
            s = math.sin(theta)
            if s <= 0.0:
                return 0.0
            _, lc = log_orthonormal(factor.poly, math.cos(theta))
            return math.exp(4.0 * float(lc) + (4 * factor.power + factor.measure_power) * math.log(s))

        roots = np.arccos(orthonormal_roots(factor.poly))
        parts.append(
            require_converged(
                f"K2 factor j={factor.j} of {spec.label()}",
                integrate(integrand, (0.0, math.pi), config.with_splits(roots)),
            )
        )
    return _product(parts, 1.0 / (2.0 * math.pi))


def k1(
    spec: StateSpec,
    config: QuadratureConfig | None = None,
    exponent: K1Exponent = K1Exponent.DERIVED,
) -> QuadratureResult:
    """K1 = int_0^inf x^e [w_{2L+1}(x) L~^2(x)]^2 dx, e = 3 - D unless overridden."""
    config = config or QuadratureConfig()
    poly = radial_polynomial(spec)
    alpha = poly.parameter
    power = exponent.power(spec.D) + 2.0 * alpha

    def integrand(x: float) -> float:
        if x <= 0.0:
            return 0.0
        _, lp = log_orthonormal(poly, x)
        return math.exp(power * math.log(x) - 2.0 * x + 4.0 * float(lp))

    cfg = config.with_splits(np.append(orthonormal_roots(poly), max(power, 1.0) / 2.0))
    result = integrate(integrand, (0.0, math.inf), cfg)
    return require_converged(f"K1 ({exponent.value}) of {spec.label()}", result)


def k3(spec: StateSpec, config: QuadratureConfig | None = None) -> QuadratureResult:
    """K3 = int_0^inf t^(4l+D-1) / (1+t^2)^(4L+8) C~^4((1-t^2)/(1+t^2)) dt."""
    config = config or QuadratureConfig()
    d = derive(spec)
    poly = momentum_polynomial(spec)
    power = 4 * spec.l + spec.D - 1
    decay = 4.0 * d.L + 8.0

    def integrand(t: float) -> float:
        if t <= 0.0:
            return 0.0
        y = 2.0 / (1.0 + t * t) - 1.0
        _, lc = log_orthonormal(poly, y)
        return math.exp(power * math.log(t) - decay * math.log1p(t * t) + 4.0 * float(lc))

    y_roots = orthonormal_roots(poly)
    t_roots = np.sqrt((1.0 - y_roots) / (1.0 + y_roots))
    result = integrate(integrand, (0.0, math.inf), config.with_splits(t_roots))
    return require_converged(f"K3 of {spec.label()}", result)


def position_disequilibrium(
    spec: StateSpec,
    config: QuadratureConfig | None = None,
    k1_exponent: K1Exponent = K1Exponent.DERIVED,
) -> QuadratureResult:
    """<rho> = 2^(D-2) Z^D / eta^(D+2) K1 K2."""
    eta = derive(spec).eta
    scale = math.exp((spec.D - 2) * _LN2 + spec.D * math.log(spec.Z) - (spec.D + 2) * math.log(eta))
    return _product([k1(spec, config, k1_exponent), k2(spec, config)], scale)


def momentum_disequilibrium(
    spec: StateSpec, config: QuadratureConfig | None = None
) -> QuadratureResult:
    """<gamma> = 2^(4L+8) eta^D / Z^D K3 K2."""
    d = derive(spec)
    scale = math.exp((4.0 * d.L + 8.0) * _LN2 + spec.D * math.log(d.eta / spec.Z))
    return _product([k3(spec, config), k2(spec, config)], scale)


def const_a(n: int, l: int, D: int) -> float:  # noqa: E741
    """A(n,l,D) = -2l[(2eta-2L-1)/(2eta) + psi(eta+L+1)] + (3eta^2 - L(L+1))/eta - ln(2^(D-1)/eta^(D+1))."""
    eta = n + (D - 3) / 2
    L = l + (D - 3) / 2
    value = (3.0 * eta**2 - L * (L + 1.0)) / eta - ((D - 1) * _LN2 - (D + 1) * math.log(eta))
    if l:
        value -= 2 * l * ((2.0 * eta - 2.0 * L - 1.0) / (2.0 * eta) + digamma(eta + L + 1.0))
    return value


def const_b(spec: StateSpec) -> float:
    """B(l,{mu},D) = ln 2pi - 2 sum_j mu_{j+1}[psi(2a_j+mu_j+mu_{j+1}) - psi(a_j+mu_j) - ln 2 - 1/(2(a_j+mu_j))]."""
    alpha = derive(spec).alpha
    mu = spec.mu
    value = math.log(2.0 * math.pi)
    for j in range(1, spec.D - 1):
        upper, lower, a = mu[j - 1], abs(mu[j]), alpha[j - 1]
        if lower == 0:
            continue
        value -= 2 * lower * (
            digamma(2.0 * a + upper + lower)
            - digamma(a + upper)
            - _LN2
            - 1.0 / (2.0 * (a + upper))
        )
    return value


def const_f(n: int, l: int, D: int) -> float:  # noqa: E741
    """F(n,l,D) of the momentum radial entropy.

    -ln(eta^D / 2^(2L+4)) - (2L+4)[psi(eta+L+1) - psi(eta)] + (L+2)/eta
    - (D+1)[1 - 2 eta (2L+1) / (4 eta^2 - 1)]
    """
    eta = n + (D - 3) / 2
    L = l + (D - 3) / 2
    denominator = 4.0 * eta**2 - 1.0
    if denominator == 0.0:
        # D=2 ground state: 2L+1 = 2 eta - 1 as well, the ratio tends to 2 eta / (2 eta + 1).
        ratio = 2.0 * eta / (2.0 * eta + 1.0)
    else:
        ratio = 2.0 * eta * (2.0 * L + 1.0) / denominator
    return (
        (2.0 * L + 4.0) * _LN2
        - D * math.log(eta)
        - (2.0 * L + 4.0) * (digamma(eta + L + 1.0) - digamma(eta))
        + (L + 2.0) / eta
        - (D + 1) * (1.0 - ratio)
    )


def _sum(results: list[QuadratureResult], offset: float) -> QuadratureResult:
    return QuadratureResult(
        value=offset + sum(r.value for r in results),
        error_estimate=sum(r.error_estimate for r in results),
        converged=all(r.converged for r in results),
        evaluations=sum(r.evaluations for r in results),
    )


def angular_entropy(spec: StateSpec, config: QuadratureConfig | None = None) -> QuadratureResult:
    """S[Y] = B + sum_j E2[C~^{alpha_j + mu_{j+1}}_{mu_j - mu_{j+1}}]."""
    parts = [
        entropy_e2(f.poly.degree, f.poly.parameter, config) for f in angular_factors(spec)
    ]
    return _sum(parts, const_b(spec))


def position_radial_entropy(
    spec: StateSpec, config: QuadratureConfig | None = None
) -> QuadratureResult:
    """S[R] = A + E1[L~^{2L+1}_{eta-L-1}] / (2 eta) - D ln Z."""
    poly = radial_polynomial(spec)
    eta = derive(spec).eta
    e1 = entropy_e1(poly.degree, poly.parameter, config)
    offset = const_a(spec.n, spec.l, spec.D) - spec.D * math.log(spec.Z)
    return QuadratureResult(
        value=offset + e1.value / (2.0 * eta),
        error_estimate=e1.error_estimate / (2.0 * eta),
        converged=e1.converged,
        evaluations=e1.evaluations,
    )


def momentum_radial_entropy(
    spec: StateSpec, config: QuadratureConfig | None = None
) -> QuadratureResult:
    """S[M] = F + E2[C~^{L+1}_{eta-L-1}] + D ln Z."""
    poly = momentum_polynomial(spec)
    e2 = entropy_e2(poly.degree, poly.parameter, config)
    return _sum([e2], const_f(spec.n, spec.l, spec.D) + spec.D * math.log(spec.Z))
