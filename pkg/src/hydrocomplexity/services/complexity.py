"""Disequilibrium, Shannon entropy and shape complexity per space.

Three independent ways of producing a MeasureReport:

- closed_form: ground and circular states only, everything in log space
  through ln_gamma and digamma.
- functional: the decomposition into A, B, F, E1, E2 and K1, K2, K3 from
  `functionals`, valid for any state.
- direct_oracle: straight quadrature of R^4, R^2 ln R^2 (position, r = lambda x)
  and M^4, M^2 ln M^2 (momentum, p = (Z/eta) tan(chi/2)) built from the
  wavefunctions in `states`, with the angular part integrated factor by factor.

The module also carries the dimensional (D -> inf) and Rydberg (n -> inf)
asymptotes of the complexities and of their product.
"""

from __future__ import annotations

import logging
import math
import sys
from collections.abc import Callable
from enum import Enum
from itertools import pairwise
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ClosedFormUnavailable, StateError
from . import functionals as fn
from .functionals import K1Exponent, require_converged
from .specfun import (
    TINY_DENSITY,
    QuadratureConfig,
    QuadratureResult,
    digamma,
    integrate,
    ln_gamma,
    orthonormal_roots,
)
from .states import (
    AngularFactor,
    StateSpec,
    angular_factors,
    circular_state,
    derive,
    ground_state,
    log_radial_momentum,
    log_radial_position,
    mean_radius,
    momentum_polynomial,
    radial_polynomial,
)

if TYPE_CHECKING:
    from ..config import Settings

logger = logging.getLogger(__name__)

_LN2 = math.log(2.0)
_LNPI = math.log(math.pi)
_LN2PI = math.log(2.0 * math.pi)
_LN3 = math.log(3.0)
_LOG_TINY = math.log(TINY_DENSITY)
_LOG_MAX = math.log(sys.float_info.max)


class Space(str, Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


class Method(str, Enum):
    AUTO = "auto"
    CLOSED_FORM = "closed_form"
    FUNCTIONAL = "functional"
    DIRECT_ORACLE = "direct_oracle"


FORMULAS: dict[tuple[Method, Space], tuple[str, ...]] = {
    (Method.CLOSED_FORM, Space.POSITION): (
        "<rho> ground: (2Z/(D-1))^D Gamma(D/2) / (2 pi^(D/2) Gamma(D))",
        "S[rho] ground: D + ln Gamma(D) + D ln lambda + ln |S^(D-1)|",
        "<rho>, S[rho] circular: Gamma-distributed x = r/lambda, shape 2 eta + 1",
        "C[rho] = <rho> exp(S[rho])",
    ),
    (Method.CLOSED_FORM, Space.MOMENTUM): (
        "<gamma> ground: 2^(2D) (eta/Z)^D Gamma((D+1)/2)^2 Gamma(3D/2+2) / (pi^(D/2+1) Gamma(2D+2))",
        "S[gamma] ground: -ln G + (D+1)[psi(D+1) - psi(D/2+1)]",
        "<gamma>, S[gamma] circular: beta-prime distributed t^2, t = eta p / Z",
        "C[gamma] = <gamma> exp(S[gamma])",
    ),
    (Method.FUNCTIONAL, Space.POSITION): (
        "<rho> = 2^(D-2) Z^D / eta^(D+2) K1 K2",
        "S[R] = A(n,l,D) + E1 / (2 eta) - D ln Z",
        "S[Y] = B(l,{mu},D) + sum_j E2",
        "C[rho] = <rho> exp(S[rho])",
    ),
    (Method.FUNCTIONAL, Space.MOMENTUM): (
        "<gamma> = 2^(4L+8) eta^D / Z^D K3 K2",
        "S[M] = F(n,l,D) + E2 + D ln Z",
        "S[Y] = B(l,{mu},D) + sum_j E2",
        "C[gamma] = <gamma> exp(S[gamma])",
    ),
    (Method.DIRECT_ORACLE, Space.POSITION): (
        "int R^4 r^(D-1) dr, -int R^2 ln R^2 r^(D-1) dr with r = lambda x",
        "int |Y|^4 dOmega, -int |Y|^2 ln |Y|^2 dOmega factor by factor",
        "C[rho] = <rho> exp(S[rho])",
    ),
    (Method.DIRECT_ORACLE, Space.MOMENTUM): (
        "int M^4 p^(D-1) dp, -int M^2 ln M^2 p^(D-1) dp with p = (Z/eta) tan(chi/2)",
        "int |Y|^4 dOmega, -int |Y|^2 ln |Y|^2 dOmega factor by factor",
        "C[gamma] = <gamma> exp(S[gamma])",
    ),
}


# Equation labels behind each evaluation path, emitted as `paper_refs`.
GROUND_REFS: dict[Space, tuple[str, ...]] = {
    Space.POSITION: ("denPosGS", "DposGS", "SYgs", "SposGS", "CposGS"),
    Space.MOMENTUM: ("denMomGS", "DmomGS", "SYgs", "SmomGS", "CmomGS"),
}
CIRCULAR_REFS: dict[Space, tuple[str, ...]] = {
    Space.POSITION: ("DposCS", "SposCS", "A2", "CposCS"),
    Space.MOMENTUM: ("DmomCS", "SmomCS", "CmomCS"),
}
NUMERIC_REFS: dict[tuple[Method, Space], tuple[str, ...]] = {
    (Method.FUNCTIONAL, Space.POSITION): (
        "Drho1", "K1", "K2", "Srho1", "SR", "SY", "E1", "E2", "CposFinal"
    ),
    (Method.FUNCTIONAL, Space.MOMENTUM): (
        "Cmom", "K3", "K2", "Sgamma", "F1", "SY", "E2", "CmomFinal"
    ),
    (Method.DIRECT_ORACLE, Space.POSITION): ("defCpos", "Drho", "Srho", "SR", "SY"),
    (Method.DIRECT_ORACLE, Space.MOMENTUM): ("defCmom", "denmom", "Sgamma", "SY"),
}


class MeasureReport(BaseModel):
    """Disequilibrium, entropies and complexity of one state in one space."""

    model_config = ConfigDict(frozen=True)

    D: int
    Z: float
    n: int
    mu: tuple[int, ...]
    space: Space
    method: Method
    disequilibrium: float = Field(ge=0.0)
    entropy_radial: float
    entropy_angular: float
    entropy_total: float
    complexity: float = Field(gt=0.0)
    error_estimate: float = Field(ge=0.0)
    converged: bool = True
    formulas: tuple[str, ...] = ()
    paper_refs: tuple[str, ...] = ()


def _report(
    spec: StateSpec,
    space: Space,
    method: Method,
    log_disequilibrium: float,
    entropy_radial: float,
    entropy_angular: float,
    error_estimate: float = 0.0,
    converged: bool = True,
    paper_refs: tuple[str, ...] = (),
) -> MeasureReport:
    total = entropy_radial + entropy_angular
    return MeasureReport(
        D=spec.D,
        Z=spec.Z,
        n=spec.n,
        mu=spec.mu,
        space=space,
        method=method,
        disequilibrium=math.exp(log_disequilibrium),
        entropy_radial=entropy_radial,
        entropy_angular=entropy_angular,
        entropy_total=total,
        complexity=math.exp(log_disequilibrium + total),
        error_estimate=error_estimate,
        converged=converged,
        formulas=FORMULAS[(method, space)],
        paper_refs=paper_refs or NUMERIC_REFS.get((method, space), ()),
    )


# Closed forms. Every quantity is assembled as a sum of logs.


def _log_sphere_area(D: int) -> float:
    """ln |S^(D-1)| = ln(2 pi^(D/2) / Gamma(D/2))."""
    return _LN2 + 0.5 * D * _LNPI - ln_gamma(0.5 * D)


def log_complexity_ground(D: int, space: Space) -> float:
    """ln C of the ground state: D ln(e/2) in position, the digamma form in momentum."""
    if space is Space.POSITION:
        return D * (1.0 - _LN2)
    return (
        D * _LN2
        + ln_gamma(0.5 * (D + 1))
        + ln_gamma(1.5 * D + 2.0)
        - 0.5 * _LNPI
        - ln_gamma(2.0 * D + 2.0)
        + (D + 1) * (digamma(D + 1.0) - digamma(0.5 * D + 1.0))
    )


def log_complexity_circular(n: int, D: int, space: Space) -> float:
    """ln C of the circular state (n, D); Z-free.

    Usable far beyond double range of C itself (n, D in the hundreds).
    """
    h = 0.5 * (D - 1)
    if space is Space.POSITION:
        return (
            ln_gamma(n - 0.5)
            + ln_gamma(2 * n + 0.5 * (D - 3))
            - (2 * n + D - 2) * _LN2
            - 0.5 * _LNPI
            - ln_gamma(n + h)
            + 2 * n
            + D
            - 2
            - (n - 1) * (digamma(n) + digamma(n + h))
        )
    exponent = (
        (n + h) * digamma(n + h)
        - 0.5 * (D + 1) * digamma(n + 0.5 * D)
        - (n - 1) * digamma(n)
    )
    return (
        (4 * n + 2 * D - 3) * _LN2
        + ln_gamma(n + h)
        + ln_gamma(2 * n - 1)
        + ln_gamma(2 * n + 1.5 * D)
        - 0.5 * _LNPI
        - ln_gamma(n)
        - ln_gamma(4 * n + 2 * D - 2)
        + exponent
    )


def _ground_components(D: int, Z: float, space: Space) -> tuple[float, float, float]:
    """(ln disequilibrium, radial entropy, angular entropy) of the ground state."""
    eta = 0.5 * (D - 1)
    s_y = _log_sphere_area(D)
    if space is Space.POSITION:
        lam = eta / (2.0 * Z)
        log_dis = (
            D * math.log(2.0 * Z / (D - 1))
            + ln_gamma(0.5 * D)
            - _LN2
            - 0.5 * D * _LNPI
            - ln_gamma(D)
        )
        return log_dis, D + ln_gamma(D) + D * math.log(lam), s_y
    log_scale = D * math.log(eta / Z)
    log_dis = (
        2 * D * _LN2
        + log_scale
        + 2.0 * ln_gamma(0.5 * (D + 1))
        + ln_gamma(1.5 * D + 2.0)
        - (0.5 * D + 1.0) * _LNPI
        - ln_gamma(2.0 * D + 2.0)
    )
    log_g = D * _LN2 + log_scale + ln_gamma(0.5 * (D + 1)) - 0.5 * (D + 1) * _LNPI
    total = -log_g + (D + 1) * (digamma(D + 1.0) - digamma(0.5 * D + 1.0))
    return log_dis, total - s_y, s_y


def _circular_components(n: int, D: int, Z: float, space: Space) -> tuple[float, float, float]:
    l = n - 1  # noqa: E741
    eta = n + 0.5 * (D - 3)
    half = 0.5 * D
    log_k_y = (
        2.0 * ln_gamma(half + l)
        + ln_gamma(2 * l + 1)
        - _LN2
        - half * _LNPI
        - 2.0 * ln_gamma(l + 1)
        - ln_gamma(half + 2 * l)
    )
    s_y = _LN2 + half * _LNPI + ln_gamma(l + 1) - ln_gamma(half + l)
    if l:
        s_y -= l * (digamma(l + 1.0) - digamma(l + half))

    if space is Space.POSITION:
        log_lam = math.log(eta / (2.0 * Z))
        log_k_r = (
            -D * log_lam
            + ln_gamma(4 * l + D)
            - (4 * l + D) * _LN2
            - 2.0 * ln_gamma(2.0 * eta + 1.0)
        )
        s_r = D * log_lam + ln_gamma(2.0 * eta + 1.0) + 2.0 * eta + 1.0
        if l:
            s_r -= 2 * l * digamma(2.0 * eta + 1.0)
        return log_k_r + log_k_y, s_r, s_y

    log_scale = D * math.log(eta / Z)
    log_c = (2.0 * eta + 2.0) * _LN2 + ln_gamma(eta + 1.0) - 0.5 * _LNPI - ln_gamma(eta + 0.5)
    log_k_p = (
        log_scale
        + 2.0 * log_c
        + ln_gamma(half + 2 * l)
        + ln_gamma(2.0 * eta + 3.0 + half)
        - _LN2
        - ln_gamma(4.0 * eta + 4.0)
    )
    s_m = (
        -log_c
        - log_scale
        + l / (eta + 0.5)
        + (2.0 * eta + 2.0) * (digamma(2.0 * eta + 2.0) - digamma(eta + 1.5))
    )
    return log_k_p + log_k_y, s_m, s_y


# Asymptotes


class Limit(str, Enum):
    DIMENSIONAL = "dimensional"
    RYDBERG = "rydberg"


class Quantity(str, Enum):
    POS_COMPLEXITY = "pos_complexity"
    MOM_COMPLEXITY = "mom_complexity"
    PRODUCT = "product"


class AsymptoticRequest(BaseModel):
    """A limit, the quantity it applies to, and where to evaluate it.

    The dimensional limit holds n fixed and is evaluated at D; the Rydberg
    limit holds D fixed (n is only needed to compare with the exact value).
    """

    model_config = ConfigDict(frozen=True)

    limit: Limit
    quantity: Quantity
    n: int | None = Field(default=None, ge=1)
    D: int | None = Field(default=None, ge=2)

    @model_validator(mode="after")
    def _check_parameters(self) -> "AsymptoticRequest":
        if self.D is None:
            raise ValueError(f"the {self.limit.value} limit needs D")
        if self.limit is Limit.DIMENSIONAL and self.n is None:
            raise ValueError("the dimensional limit needs a fixed n")
        return self


class AsymptoticResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    request: AsymptoticRequest
    log_value: float
    value: float | None


class LimitRow(BaseModel):
    """Exact and asymptotic complexity side by side, both as logs."""

    model_config = ConfigDict(frozen=True)

    limit: Limit
    quantity: Quantity
    n: int
    D: int
    log_exact: float
    log_asymptote: float
    log_ratio: float
    ratio: float | None


def log_dimensional_asymptote(n: int, D: int, quantity: Quantity) -> float:
    """ln of the D -> inf form of C[rho], C[gamma] or their product, circular state n."""
    log_pos = (
        (D + 2 * n - 2) * (1.0 - _LN2)
        + (1 - n) * digamma(n)
        + ln_gamma(n - 0.5)
        - 0.5 * _LNPI
    )
    # At n = 1 this is 3^(3(D+1)/2) / (2^(2D+3/2) sqrt(e)).
    log_mom = (
        D * (1.5 * _LN3 - 2.0 * _LN2)
        + (2 * n - 0.5) * _LN3
        + ln_gamma(2 * n - 1)
        - (4 * n - 2.5) * _LN2
        - ln_gamma(n)
        + (1 - n) * digamma(n)
        - 0.5
    )
    if quantity is Quantity.POS_COMPLEXITY:
        return log_pos
    if quantity is Quantity.MOM_COMPLEXITY:
        return log_mom
    return log_pos + log_mom


def log_rydberg_asymptote(D: int, quantity: Quantity) -> float:
    """ln of (e/2)^((D-1)/2) per space, (e/2)^(D-1) for the product."""
    per_space = 0.5 * (D - 1) * (1.0 - _LN2)
    return 2.0 * per_space if quantity is Quantity.PRODUCT else per_space


def log_exact_complexity(n: int, D: int, quantity: Quantity) -> float:
    """ln C of the circular state (n, D) for the given quantity."""
    if quantity is Quantity.POS_COMPLEXITY:
        return log_complexity_circular(n, D, Space.POSITION)
    if quantity is Quantity.MOM_COMPLEXITY:
        return log_complexity_circular(n, D, Space.MOMENTUM)
    return log_complexity_circular(n, D, Space.POSITION) + log_complexity_circular(
        n, D, Space.MOMENTUM
    )


def _linear(log_value: float) -> float | None:
    return math.exp(log_value) if log_value < _LOG_MAX else None


# Direct oracle integrands


def _entropy_term(log_density: float, log_value: float) -> float:
    """-q ln f for a density q = exp(log_density); 0 ln 0 = 0."""
    if not math.isfinite(log_density) or log_density <= _LOG_TINY:
        return 0.0
    return -math.exp(log_density) * log_value


def _log_peak(
    log_integrand: Callable[[float], float],
    interval: tuple[float, float],
    splits: np.ndarray,
) -> float:
    """Largest finite log value over the split points, their midpoints and a coarse grid."""
    a, b = interval
    nodes = sorted(float(s) for s in splits if a < s < b)
    if math.isinf(b):
        top = 2.0 * nodes[-1] - a if nodes else a + 1.0
        grid = np.linspace(a, top, 65)[1:]
    else:
        grid = np.linspace(a, b, 65)[1:-1]
    candidates = [*nodes, *grid, *(0.5 * (u + v) for u, v in pairwise(nodes))]
    values = [v for v in (log_integrand(float(u)) for u in candidates) if math.isfinite(v)]
    return max(values) if values else 0.0


class ComplexityService:
    """Service assembling MeasureReports by closed form, decomposition or direct quadrature."""

    def __init__(
        self,
        quadrature: QuadratureConfig | None = None,
        k1_exponent: K1Exponent = K1Exponent.DERIVED,
    ):
        self.quadrature = quadrature or QuadratureConfig()
        self.k1_exponent = k1_exponent

    @classmethod
    def from_settings(
        cls, settings: "Settings", k1_exponent: K1Exponent = K1Exponent.DERIVED
    ) -> "ComplexityService":
        return cls(settings.quadrature(), k1_exponent)

    def measure(
        self, spec: StateSpec, space: Space, method: Method = Method.AUTO
    ) -> MeasureReport:
        """Disequilibrium, entropy and complexity of `spec` in `space`.

        AUTO resolves to the closed form for ground and circular states and to
        the functional decomposition otherwise; the oracle only runs on request.
        """
        if method is Method.AUTO:
            closed = spec.is_ground or spec.is_circular
            method = Method.CLOSED_FORM if closed else Method.FUNCTIONAL
        logger.info("measuring %s in %s space by %s", spec.label(), space.value, method.value)
        if method is Method.CLOSED_FORM:
            return self.closed_form(spec, space)
        if method is Method.FUNCTIONAL:
            return self.functional(spec, space)
        return self.direct_oracle(spec, space)

    def closed_form(self, spec: StateSpec, space: Space) -> MeasureReport:
        if spec.is_ground:
            return self.closed_ground(spec.D, spec.Z, space)
        if spec.is_circular:
            return self.closed_circular(spec.n, spec.D, spec.Z, space)
        raise ClosedFormUnavailable(
            f"No closed form for {spec.label()}: only ground and circular states have one"
        )

    def closed_ground(self, D: int, Z: float = 1.0, space: Space = Space.POSITION) -> MeasureReport:
        spec = ground_state(D, Z)
        log_dis, s_r, s_y = _ground_components(D, spec.Z, space)
        return _report(
            spec, space, Method.CLOSED_FORM, log_dis, s_r, s_y, paper_refs=GROUND_REFS[space]
        )

    def closed_circular(
        self, n: int, D: int, Z: float = 1.0, space: Space = Space.POSITION
    ) -> MeasureReport:
        spec = circular_state(n, D, Z)
        log_dis, s_r, s_y = _circular_components(n, D, spec.Z, space)
        return _report(
            spec, space, Method.CLOSED_FORM, log_dis, s_r, s_y, paper_refs=CIRCULAR_REFS[space]
        )

    def functional(self, spec: StateSpec, space: Space) -> MeasureReport:
        q = self.quadrature
        if space is Space.POSITION:
            dis = fn.position_disequilibrium(spec, q, self.k1_exponent)
            radial = fn.position_radial_entropy(spec, q)
        else:
            dis = fn.momentum_disequilibrium(spec, q)
            radial = fn.momentum_radial_entropy(spec, q)
        angular = fn.angular_entropy(spec, q)
        return self._numeric_report(spec, space, Method.FUNCTIONAL, dis, radial, angular)

    def direct_oracle(self, spec: StateSpec, space: Space) -> MeasureReport:
        if space is Space.POSITION:
            radial_dis, radial = self._oracle_position_radial(spec)
        else:
            radial_dis, radial = self._oracle_momentum_radial(spec)
        angular_dis, angular = self._oracle_angular(spec)
        dis = QuadratureResult(
            value=radial_dis.value * angular_dis.value,
            error_estimate=abs(radial_dis.value * angular_dis.value)
            * (
                radial_dis.error_estimate / radial_dis.value
                + angular_dis.error_estimate / angular_dis.value
            ),
            converged=radial_dis.converged and angular_dis.converged,
            evaluations=radial_dis.evaluations + angular_dis.evaluations,
        )
        return self._numeric_report(spec, space, Method.DIRECT_ORACLE, dis, radial, angular)

    def _numeric_report(
        self,
        spec: StateSpec,
        space: Space,
        method: Method,
        dis: QuadratureResult,
        radial: QuadratureResult,
        angular: QuadratureResult,
    ) -> MeasureReport:
        require_converged(f"{space.value} disequilibrium of {spec.label()}", dis)
        entropy_error = radial.error_estimate + angular.error_estimate
        report = _report(
            spec,
            space,
            method,
            math.log(dis.value),
            radial.value,
            angular.value,
            converged=dis.converged and radial.converged and angular.converged,
        )
        error = report.complexity * (dis.error_estimate / dis.value + entropy_error)
        return report.model_copy(update={"error_estimate": error})

    def _integrate_pair(
        self,
        what: str,
        log_density: Callable[[float], tuple[float, float]],
        interval: tuple[float, float],
        splits: np.ndarray,
    ) -> tuple[QuadratureResult, QuadratureResult]:
        """int q f and -int q ln f for a density q = exp(ld) and ln f = lf.

        q f is integrated divided by its largest sampled value so that the
        absolute tolerance never decides convergence for small integrals.
        """
        log_peak = _log_peak(lambda u: sum(log_density(u)), interval, splits)

        def squared(u: float) -> float:
            ld, lf = log_density(u)
            if not math.isfinite(ld):
                return 0.0
            return math.exp(ld + lf - log_peak)

        def entropy(u: float) -> float:
            ld, lf = log_density(u)
            return _entropy_term(ld, lf)

        cfg = self.quadrature.with_splits(splits)
        scaled = require_converged(f"{what} disequilibrium", integrate(squared, interval, cfg))
        peak = math.exp(log_peak)
        dis = scaled.model_copy(
            update={"value": scaled.value * peak, "error_estimate": scaled.error_estimate * peak}
        )
        ent = require_converged(f"{what} entropy", integrate(entropy, interval, cfg))
        return dis, ent

    def _oracle_position_radial(self, spec: StateSpec) -> tuple[QuadratureResult, QuadratureResult]:
        lam = derive(spec).lam
        log_jacobian = spec.D * math.log(lam)

        def log_density(x: float) -> tuple[float, float]:
            if x <= 0.0:
                return -math.inf, 0.0
            _, log_r = log_radial_position(spec, lam * x)
            log_r2 = 2.0 * float(log_r)
            return log_r2 + (spec.D - 1) * math.log(x) + log_jacobian, log_r2

        splits = np.append(orthonormal_roots(radial_polynomial(spec)), mean_radius(spec) / lam)
        return self._integrate_pair(
            f"radial position of {spec.label()}", log_density, (0.0, math.inf), splits
        )

    def _oracle_momentum_radial(self, spec: StateSpec) -> tuple[QuadratureResult, QuadratureResult]:
        log_unit = math.log(spec.Z / derive(spec).eta)

        def log_density(chi: float) -> tuple[float, float]:
            if chi <= 0.0 or chi >= math.pi:
                return -math.inf, 0.0
            half = 0.5 * chi
            p = math.exp(log_unit) * math.tan(half)
            _, log_m = log_radial_momentum(spec, p)
            log_m2 = 2.0 * float(log_m)
            log_p = log_unit + math.log(math.tan(half))
            log_dp = log_unit - _LN2 - 2.0 * math.log(math.cos(half))
            return log_m2 + (spec.D - 1) * log_p + log_dp, log_m2

        splits = np.arccos(orthonormal_roots(momentum_polynomial(spec)))
        return self._integrate_pair(
            f"radial momentum of {spec.label()}", log_density, (0.0, math.pi), splits
        )

    def _oracle_angular(self, spec: StateSpec) -> tuple[QuadratureResult, QuadratureResult]:
        """int |Y|^4 dOmega and S[Y] as products and sums over the theta factors."""
        dis = QuadratureResult(value=1.0 / (2.0 * math.pi), error_estimate=0.0, converged=True)
        entropy = QuadratureResult(value=_LN2PI, error_estimate=0.0, converged=True)
        for factor in angular_factors(spec):

            def log_density(theta: float, factor: AngularFactor = factor) -> tuple[float, float]:
                s = math.sin(theta)
                if s <= 0.0:
                    return -math.inf, 0.0
                log_f = float(factor.log_value(theta))
                return log_f + factor.measure_power * math.log(s), log_f

            splits = np.arccos(orthonormal_roots(factor.poly))
            f_sq, f_ent = self._integrate_pair(
                f"theta_{factor.j} factor of {spec.label()}", log_density, (0.0, math.pi), splits
            )
            value = dis.value * f_sq.value
            dis = QuadratureResult(
                value=value,
                error_estimate=abs(value)
                * (dis.error_estimate / dis.value + f_sq.error_estimate / f_sq.value),
                converged=dis.converged and f_sq.converged,
                evaluations=dis.evaluations + f_sq.evaluations,
            )
            entropy = entropy + f_ent
        return dis, entropy

    def asymptotic(self, req: AsymptoticRequest) -> AsymptoticResult:
        """Evaluate a dimensional or Rydberg asymptote; the linear value is None on overflow."""
        assert req.D is not None
        if req.limit is Limit.DIMENSIONAL:
            assert req.n is not None
            log_value = log_dimensional_asymptote(req.n, req.D, req.quantity)
        else:
            log_value = log_rydberg_asymptote(req.D, req.quantity)
        return AsymptoticResult(request=req, log_value=log_value, value=_linear(log_value))

    def limit_row(self, req: AsymptoticRequest) -> LimitRow:
        """Compare the circular-state complexity at (n, D) with its asymptote."""
        if req.n is None or req.D is None:
            raise StateError("a limit comparison needs both n and D")
        log_exact = log_exact_complexity(req.n, req.D, req.quantity)
        log_asym = self.asymptotic(req).log_value
        return LimitRow(
            limit=req.limit,
            quantity=req.quantity,
            n=req.n,
            D=req.D,
            log_exact=log_exact,
            log_asymptote=log_asym,
            log_ratio=log_exact / log_asym if log_asym else math.nan,
            ratio=_linear(log_exact - log_asym),
        )

    def uncertainty_product(
        self, state: StateSpec | tuple[int, int], method: Method = Method.AUTO
    ) -> float:
        """C[rho] C[gamma] of a state, or of the circular state given as (n, D)."""
        spec = state if isinstance(state, StateSpec) else circular_state(*state)
        position = self.measure(spec, Space.POSITION, method)
        momentum = self.measure(spec, Space.MOMENTUM, method)
        return position.complexity * momentum.complexity
