"""Special functions and error-controlled quadrature.

Every other service builds on this module: log-gamma and digamma, the
orthonormal Laguerre and Gegenbauer polynomials evaluated by their
three-term recurrence, root location for quadrature split points, and a
thin, never-raising wrapper around QUADPACK's adaptive integrators.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Callable, Sequence
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import integrate as spi
from scipy import optimize, special

from ..errors import DomainError

logger = logging.getLogger(__name__)

# Densities at or below this value contribute 0 to -p ln p (0 ln 0 = 0).
TINY_DENSITY = 1e-300

# Scaled recurrence values are renormalised past this magnitude.
_RESCALE = 1e100

_SCAN_POINTS_PER_ROOT = 64

# Smallest relative tolerance brentq accepts.
_BRENT_RTOL = 4.0 * float(np.finfo(float).eps)


class PolyFamily(str, Enum):
    LAGUERRE = "laguerre"
    GEGENBAUER = "gegenbauer"


class OrthoPolySpec(BaseModel):
    """Orthonormal polynomial of a given family, degree and parameter.

    Laguerre polynomials are orthonormal on [0, inf) with weight
    x^alpha e^-x; Gegenbauer polynomials on [-1, 1] with weight
    (1 - x^2)^(lambda - 1/2).
    """

    model_config = ConfigDict(frozen=True)

    family: PolyFamily
    degree: int = Field(ge=0)
    parameter: float

    @model_validator(mode="after")
    def _check_parameter(self) -> "OrthoPolySpec":
        if not math.isfinite(self.parameter):
            raise ValueError("polynomial parameter must be finite")
        if self.family is PolyFamily.LAGUERRE and self.parameter <= -1.0:
            raise ValueError(f"Laguerre parameter must be > -1, got {self.parameter}")
        if self.family is PolyFamily.GEGENBAUER:
            if self.parameter <= -0.5:
                raise ValueError(
                    f"Gegenbauer parameter must be > -1/2, got {self.parameter}"
                )
            if self.parameter == 0.0:
                raise ValueError("Gegenbauer parameter must be nonzero")
        return self

    @classmethod
    def laguerre(cls, degree: int, alpha: float) -> "OrthoPolySpec":
        return cls(family=PolyFamily.LAGUERRE, degree=degree, parameter=alpha)

    @classmethod
    def gegenbauer(cls, degree: int, lam: float) -> "OrthoPolySpec":
        return cls(family=PolyFamily.GEGENBAUER, degree=degree, parameter=lam)

    @property
    def interval(self) -> tuple[float, float]:
        if self.family is PolyFamily.LAGUERRE:
            return (0.0, math.inf)
        return (-1.0, 1.0)

    def log_weight(self, x: ArrayLike) -> NDArray[np.float64]:
        """Logarithm of the orthogonality weight at x."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            if self.family is PolyFamily.LAGUERRE:
                return self.parameter * np.log(x) - x
            return (self.parameter - 0.5) * np.log1p(-x * x)

    def weight(self, x: ArrayLike) -> NDArray[np.float64]:
        return np.exp(self.log_weight(x))


class QuadratureConfig(BaseModel):
    """Tolerances and subdivision budget for `integrate`."""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=1e-10, gt=0.0, lt=1.0)
    abs_tol: float = Field(default=1e-14, gt=0.0)
    max_subdivisions: int = Field(default=2000, ge=1)
    split_points: tuple[float, ...] = ()

    def with_splits(self, points: ArrayLike) -> "QuadratureConfig":
        pts = tuple(float(p) for p in np.atleast_1d(np.asarray(points, dtype=float)))
        return self.model_copy(update={"split_points": pts})


class QuadratureResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    error_estimate: float = Field(ge=0.0)
    converged: bool
    evaluations: int = 0

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            converged=self.converged and other.converged,
            evaluations=self.evaluations + other.evaluations,
        )


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} requires x > 0, got {x}")
    return x


def ln_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    return float(special.gammaln(_check_positive("ln_gamma", x)))


def digamma(x: float) -> float:
    """psi(x) = Gamma'(x) / Gamma(x) for x > 0."""
    return float(special.digamma(_check_positive("digamma", x)))


def log_norm0(spec: OrthoPolySpec) -> float:
    """ln of the integral of the weight (the degree-0 squared norm)."""
    p = spec.parameter
    if spec.family is PolyFamily.LAGUERRE:
        return float(special.gammaln(p + 1.0))
    return float(0.5 * math.log(math.pi) + special.gammaln(p + 0.5) - special.gammaln(p + 1.0))


def log_classical_norm(spec: OrthoPolySpec) -> float:
    """ln h_k, the squared norm of the classical (unnormalised) polynomial."""
    k, p = spec.degree, spec.parameter
    if spec.family is PolyFamily.LAGUERRE:
        return float(special.gammaln(k + p + 1.0) - special.gammaln(k + 1.0))
    if k == 0:
        return log_norm0(spec)
    return float(
        math.log(math.pi)
        + (1.0 - 2.0 * p) * math.log(2.0)
        + special.gammaln(k + 2.0 * p)
        - special.gammaln(k + 1.0)
        - math.log(k + p)
        - 2.0 * special.gammaln(p)
    )


def _jacobi_coefficients(spec: OrthoPolySpec) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Diagonal a_j (j < k) and off-diagonal b_j (j <= k, b_0 = 0) of the recurrence.

    Laguerre:   p_{j+1} = ((a_j - x) p_j - b_j p_{j-1}) / b_{j+1}
    Gegenbauer: p_{j+1} = (x p_j - b_j p_{j-1}) / b_{j+1}
    """
    k, p = spec.degree, spec.parameter
    j = np.arange(k + 1, dtype=float)
    b = np.zeros(k + 1)
    if spec.family is PolyFamily.LAGUERRE:
        a = 2.0 * j[:k] + p + 1.0
        b[1:] = np.sqrt(j[1:] * (j[1:] + p))
        return a, b
    a = np.zeros(k)
    if k >= 1:
        b[1] = math.sqrt(0.5 / (1.0 + p))
        m = j[2:]
        b[2:] = 0.5 * np.sqrt(m * (m + 2.0 * p - 1.0) / ((m + p) * (m + p - 1.0)))
    return a, b


@lru_cache(maxsize=1024)
def _recurrence_table(spec: OrthoPolySpec) -> tuple[float, list[float], list[float]]:
    a, b = _jacobi_coefficients(spec)
    return -0.5 * log_norm0(spec), a.tolist(), b.tolist()


def _log_orthonormal_scalar(spec: OrthoPolySpec, x: float) -> tuple[np.float64, np.float64]:
    # Same recurrence as log_orthonormal without numpy overhead; quad calls this per point.
    log_scale, a, b = _recurrence_table(spec)
    laguerre = spec.family is PolyFamily.LAGUERRE
    prev, cur = 0.0, 1.0
    for j in range(spec.degree):
        if laguerre:
            nxt = ((a[j] - x) * cur - b[j] * prev) / b[j + 1]
        else:
            nxt = (x * cur - b[j] * prev) / b[j + 1]
        prev, cur = cur, nxt
        if abs(cur) > _RESCALE:
            factor = abs(cur)
            cur /= factor
            prev /= factor
            log_scale += math.log(factor)
    if cur == 0.0:
        return np.float64(0.0), np.float64(-math.inf)
    return np.float64(math.copysign(1.0, cur)), np.float64(math.log(abs(cur)) + log_scale)


def log_orthonormal(
    spec: OrthoPolySpec, x: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Sign and log-magnitude of the orthonormal polynomial at x.

    The recurrence runs on values scaled by a running power of e so that
    neither the degree-0 normalisation (Gamma(alpha+1)^-1/2 underflows for
    large alpha) nor growth outside the oscillatory region overflow.
    Zeros come back as sign 0 and log -inf.
    """
    if np.ndim(x) == 0:
        return _log_orthonormal_scalar(spec, float(x))  # type: ignore[return-value]
    xs = np.asarray(x, dtype=float)
    a, b = _jacobi_coefficients(spec)
    laguerre = spec.family is PolyFamily.LAGUERRE
    log_scale = np.full(xs.shape, -0.5 * log_norm0(spec))
    prev = np.zeros(xs.shape)
    cur = np.ones(xs.shape)
    for j in range(spec.degree):
        if laguerre:
            nxt = ((a[j] - xs) * cur - b[j] * prev) / b[j + 1]
        else:
            nxt = (xs * cur - b[j] * prev) / b[j + 1]
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if np.any(big):
            factor = np.where(big, np.abs(cur), 1.0)
            cur = cur / factor
            prev = prev / factor
            log_scale = log_scale + np.log(factor)
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(cur)) + log_scale
    return np.sign(cur), log_abs


def eval_orthonormal(spec: OrthoPolySpec, x: ArrayLike) -> NDArray[np.float64] | float:
    """Value of the orthonormal polynomial at x (scalar in, scalar out)."""
    lo, hi = spec.interval
    xs = np.asarray(x, dtype=float)
    if np.any(xs < lo) or np.any(xs > hi):
        raise DomainError(f"{spec.family.value} polynomial evaluated outside [{lo}, {hi}]")
    sign, log_abs = log_orthonormal(spec, xs)
    value = sign * np.exp(log_abs)
    if value.ndim == 0:
        return float(value)
    return value


def _laguerre_upper_bound(spec: OrthoPolySpec) -> float:
    # Gershgorin bound on the Jacobi matrix whose eigenvalues are the zeros.
    a, b = _jacobi_coefficients(spec)
    k = spec.degree
    return float(max(a[j] + b[j] + b[j + 1] for j in range(k)))


def orthonormal_roots(spec: OrthoPolySpec) -> NDArray[np.float64]:
    """All k zeros of the degree-k polynomial, in increasing order.

    Sign changes are located on a scan of 64 (k + 1) points, uniform in
    sqrt(x) for Laguerre and in arccos(x) for Gegenbauer where the zeros are
    close to equispaced, then refined with Brent's method. The scan is
    doubled if fewer than k sign changes show up.
    """
    k = spec.degree
    if k == 0:
        return np.empty(0)
    if spec.family is PolyFamily.LAGUERRE:
        upper = math.sqrt(_laguerre_upper_bound(spec))

        def to_x(t: NDArray[np.float64]) -> NDArray[np.float64]:
            return t * t

        t_lo, t_hi = 0.0, upper
    else:

        def to_x(t: NDArray[np.float64]) -> NDArray[np.float64]:
            return np.cos(t)

        t_lo, t_hi = math.pi, 0.0

    points = _SCAN_POINTS_PER_ROOT * (k + 1)
    for _ in range(6):
        grid = to_x(np.linspace(t_lo, t_hi, points))
        sign, log_abs = log_orthonormal(spec, grid)
        exact = np.flatnonzero(sign == 0)
        changes = np.flatnonzero(sign[:-1] * sign[1:] < 0)
        if len(changes) + len(exact) >= k:
            break
        points *= 2
    else:
        raise DomainError(f"could not isolate the {k} zeros of {spec}")

    finite = log_abs[np.isfinite(log_abs)]
    shift = float(finite.max()) if finite.size else 0.0

    def scaled(x: float) -> float:
        s, la = log_orthonormal(spec, x)
        return float(s * np.exp(la - shift))

    roots = [float(grid[i]) for i in exact]
    for i in changes:
        roots.append(optimize.brentq(scaled, grid[i], grid[i + 1], xtol=1e-15, rtol=_BRENT_RTOL))
    return np.sort(np.asarray(roots))


def _quad_piece(
    f: Callable[[float], float],
    a: float,
    b: float,
    points: Sequence[float],
    config: QuadratureConfig,
    abs_target: float | None = None,
) -> QuadratureResult:
    kwargs: dict[str, object] = {
        "epsabs": config.abs_tol if abs_target is None else abs_target,
        "epsrel": config.rel_tol if abs_target is None else 0.0,
        "limit": max(config.max_subdivisions, len(points) + 1),
        "full_output": 1,
    }
    if points:
        kwargs["points"] = list(points)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", spi.IntegrationWarning)
            out = spi.quad(f, a, b, **kwargs)
    except (ValueError, ArithmeticError) as e:
        logger.debug("quad failed on [%g, %g]: %s", a, b, e)
        return QuadratureResult(value=math.nan, error_estimate=math.inf, converged=False)
    value, error = float(out[0]), float(out[1])
    # quad appends a message to its output exactly when ier != 0.
    converged = len(out) == 3 and math.isfinite(value) and math.isfinite(error)
    evaluations = int(out[2].get("neval", 0))
    if not math.isfinite(error):
        error = math.inf
    return QuadratureResult(
        value=value, error_estimate=abs(error), converged=converged, evaluations=evaluations
    )


def _pieces(
    f: Callable[[float], float],
    a: float,
    b: float,
    points: list[float],
    config: QuadratureConfig,
    abs_target: float | None = None,
) -> QuadratureResult:
    if not math.isinf(b):
        return _quad_piece(f, a, b, points, config, abs_target)
    if not points:
        return _quad_piece(f, a, math.inf, (), config, abs_target)
    # The tail starts one span past the last split point, away from its log spike.
    cut = 2.0 * points[-1] - a
    share = None if abs_target is None else 0.5 * abs_target
    head = _quad_piece(f, a, cut, points, config, share)
    return head + _quad_piece(f, cut, math.inf, (), config, share)


def integrate(
    f: Callable[[float], float],
    interval: tuple[float, float],
    config: QuadratureConfig | None = None,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integration of f over (a, b), b possibly infinite.

    Split points strictly inside the interval are handed to QUADPACK as
    breakpoints (integrable log spikes at polynomial zeros). A semi-infinite
    interval is cut one span beyond the last split point: the finite part
    keeps the breakpoints and the tail goes through QUADPACK's (0, 1]
    variable change.

    Each piece meets its tolerance relative to its own size, so when the
    pieces cancel the sum can miss the tolerance of the total. The pieces
    are then integrated once more against the absolute error the first
    total asks for. A failure to meet the tolerance is reported as
    converged=False, never raised.
    """
    config = config or QuadratureConfig()
    a, b = float(interval[0]), float(interval[1])
    if a == b:
        return QuadratureResult(value=0.0, error_estimate=0.0, converged=True)
    if b < a:
        flipped = integrate(f, (b, a), config)
        return flipped.model_copy(update={"value": -flipped.value})
    points = sorted({p for p in config.split_points if a < p < b})

    result = _pieces(f, a, b, points, config)
    tolerance = max(config.abs_tol, config.rel_tol * abs(result.value))
    if not (result.converged and result.error_estimate <= tolerance) and math.isfinite(
        result.value
    ):
        retry = _pieces(f, a, b, points, config, abs_target=0.5 * tolerance)
        logger.debug(
            "integral on [%g, %g] retried against %.3g: error %.3g -> %.3g",
            a,
            b,
            tolerance,
            result.error_estimate,
            retry.error_estimate,
        )
        if retry.converged or not result.converged:
            result = retry
        tolerance = max(config.abs_tol, config.rel_tol * abs(result.value))

    if result.converged and result.error_estimate > tolerance:
        result = result.model_copy(update={"converged": False})
    if not result.converged:
        logger.debug(
            "integral on [%g, %g] not converged: value=%.6g error=%.3g",
            a,
            b,
            result.value,
            result.error_estimate,
        )
    return result


def xlogx_density(log_density: NDArray[np.float64] | float) -> NDArray[np.float64] | float:
    """p ln p for p = exp(log_density), with 0 ln 0 = 0 below TINY_DENSITY."""
    ld = np.asarray(log_density, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        out = np.where(ld <= math.log(TINY_DENSITY), 0.0, np.exp(ld) * ld)
    if out.ndim == 0:
        return float(out)
    return out
