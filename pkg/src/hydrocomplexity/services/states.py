"""D-dimensional hydrogenic stationary states and their densities.

Wavefunction magnitudes are carried as (sign, log|value|) pairs and only
exponentiated when a density is assembled, since prefactors such as
(eta/Z)^(D/2) and 2^(L+2) leave double range at large D and n.
All quantities are in Hartree atomic units.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import StateError
from .specfun import OrthoPolySpec, log_orthonormal, orthonormal_roots

LOG_2PI = math.log(2.0 * math.pi)


class StateSpec(BaseModel):
    """Quantum numbers (n, mu_1 = l, mu_2, ..., mu_{D-1} = m) of a state in D dimensions."""

    model_config = ConfigDict(frozen=True)

    D: int = Field(ge=2)
    Z: float = Field(default=1.0, gt=0.0)
    n: int = Field(ge=1)
    mu: tuple[int, ...]

    @model_validator(mode="after")
    def _check_quantum_numbers(self) -> "StateSpec":
        mu = self.mu
        if len(mu) != self.D - 1:
            raise ValueError(
                f"D={self.D} needs D-1={self.D - 1} hyperquantum numbers, got {len(mu)}"
            )
        if any(v < 0 for v in mu[:-1]):
            raise ValueError(f"mu_j >= 0 is required for j < D-1, got {list(mu)}")
        for j in range(len(mu) - 2):
            if mu[j] < mu[j + 1]:
                raise ValueError(
                    f"mu_{j + 1} >= mu_{j + 2} violated: {mu[j]} < {mu[j + 1]}"
                )
        if len(mu) >= 2 and mu[-2] < abs(mu[-1]):
            raise ValueError(
                f"mu_{len(mu) - 1} >= |m| violated: {mu[-2]} < {abs(mu[-1])}"
            )
        if self.l > self.n - 1:
            raise ValueError(f"l <= n-1 violated: l={self.l}, n={self.n}")
        return self

    @property
    def l(self) -> int:  # noqa: E743
        return abs(self.mu[0]) if self.D == 2 else self.mu[0]

    @property
    def m(self) -> int:
        return self.mu[-1]

    @property
    def is_ground(self) -> bool:
        return self.n == 1

    @property
    def is_circular(self) -> bool:
        return all(abs(v) == self.n - 1 for v in self.mu)

    def with_charge(self, Z: float) -> "StateSpec":
        return StateSpec(D=self.D, Z=Z, n=self.n, mu=self.mu)

    def label(self) -> str:
        return f"D={self.D} Z={self.Z:g} n={self.n} mu=({','.join(map(str, self.mu))})"


class DerivedParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    eta: float
    L: float
    lam: float
    alpha: tuple[float, ...]


def ground_state(D: int, Z: float = 1.0) -> StateSpec:
    return StateSpec(D=D, Z=Z, n=1, mu=(0,) * (D - 1))


def circular_state(n: int, D: int, Z: float = 1.0) -> StateSpec:
    """State with mu_i = n - 1 for every i (highest hyperangular momenta)."""
    return StateSpec(D=D, Z=Z, n=n, mu=(n - 1,) * (D - 1))


def derive(spec: StateSpec) -> DerivedParams:
    eta = spec.n + (spec.D - 3) / 2
    return DerivedParams(
        eta=eta,
        L=spec.l + (spec.D - 3) / 2,
        lam=eta / (2.0 * spec.Z),
        alpha=tuple((spec.D - j - 1) / 2 for j in range(1, spec.D - 1)),
    )


def energy(spec: StateSpec) -> float:
    """E = -Z^2 / (2 eta^2)."""
    eta = derive(spec).eta
    return -spec.Z**2 / (2.0 * eta**2)


def radial_polynomial(spec: StateSpec) -> OrthoPolySpec:
    """Laguerre factor of R_{n,l}: degree eta-L-1 = n-l-1, parameter 2L+1."""
    p = derive(spec)
    return OrthoPolySpec.laguerre(spec.n - spec.l - 1, 2.0 * p.L + 1.0)


def momentum_polynomial(spec: StateSpec) -> OrthoPolySpec:
    """Gegenbauer factor of M_{n,l}: degree n-l-1, parameter L+1."""
    p = derive(spec)
    return OrthoPolySpec.gegenbauer(spec.n - spec.l - 1, p.L + 1.0)


@dataclass(frozen=True)
class AngularFactor:
    """One theta_j factor of |Y|^2: C~^2(cos theta) sin^(2 power) theta.

    Against the volume element sin^(D-1-j) theta it integrates to 1 over [0, pi].
    """

    j: int
    poly: OrthoPolySpec
    power: int
    measure_power: int

    def log_value(self, theta: ArrayLike) -> NDArray[np.float64]:
        """ln of C~^2(cos theta) sin^(2 power) theta."""
        th = np.asarray(theta, dtype=float)
        _, log_c = log_orthonormal(self.poly, np.cos(th))
        out = 2.0 * log_c
        if self.power:
            with np.errstate(divide="ignore"):
                out = out + 2.0 * self.power * np.log(np.sin(th))
        return out


def angular_factors(spec: StateSpec) -> list[AngularFactor]:
    """Gegenbauer factors j = 1..D-2 of the hyperspherical harmonic (empty for D=2)."""
    alpha = derive(spec).alpha
    mu = spec.mu
    factors = []
    for j in range(1, spec.D - 1):
        upper, lower = mu[j - 1], abs(mu[j])
        factors.append(
            AngularFactor(
                j=j,
                poly=OrthoPolySpec.gegenbauer(upper - lower, alpha[j - 1] + lower),
                power=lower,
                measure_power=spec.D - 1 - j,
            )
        )
    return factors


def log_radial_position(
    spec: StateSpec, r: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Sign and ln|R_{n,l}(r)|.

    R^2 = lambda^-D / (2 eta) * omega_{2L+1}(x) / x^(D-2) * L~^2(x), x = r / lambda,
    and omega_{2L+1}(x) / x^(D-2) = x^(2l) e^-x.
    """
    p = derive(spec)
    x = np.asarray(r, dtype=float) / p.lam
    sign, log_lag = log_orthonormal(radial_polynomial(spec), x)
    log_sq = -spec.D * math.log(p.lam) - math.log(2.0 * p.eta) - x
    if spec.l:
        with np.errstate(divide="ignore"):
            log_sq = log_sq + 2 * spec.l * np.log(x)
    return sign, 0.5 * log_sq + log_lag


def radial_position(spec: StateSpec, r: ArrayLike) -> NDArray[np.float64] | float:
    sign, log_abs = log_radial_position(spec, r)
    value = sign * np.exp(log_abs)
    return float(value) if value.ndim == 0 else value


def momentum_y(spec: StateSpec, p: ArrayLike) -> NDArray[np.float64]:
    """y = (1 - eta^2 p~^2) / (1 + eta^2 p~^2), p~ = p / Z."""
    t = derive(spec).eta * np.asarray(p, dtype=float) / spec.Z
    with np.errstate(over="ignore"):
        return 2.0 / (1.0 + t * t) - 1.0


def log_radial_momentum(
    spec: StateSpec, p: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Sign and ln|M_{n,l}(p)|.

    M = 2^(L+2) (eta/Z)^(D/2) t^l (1 + t^2)^-(L+2) C~^{L+1}_{n-l-1}(y), t = eta p / Z.
    """
    d = derive(spec)
    t = d.eta * np.asarray(p, dtype=float) / spec.Z
    sign, log_c = log_orthonormal(momentum_polynomial(spec), momentum_y(spec, p))
    with np.errstate(over="ignore"):
        log_abs = (
            (d.L + 2.0) * math.log(2.0)
            + 0.5 * spec.D * math.log(d.eta / spec.Z)
            - (d.L + 2.0) * np.log1p(t * t)
            + log_c
        )
    if spec.l:
        with np.errstate(divide="ignore"):
            log_abs = log_abs + spec.l * np.log(t)
    return sign, log_abs


def radial_momentum(spec: StateSpec, p: ArrayLike) -> NDArray[np.float64] | float:
    sign, log_abs = log_radial_momentum(spec, p)
    value = sign * np.exp(log_abs)
    return float(value) if value.ndim == 0 else value


def _validate_angles(spec: StateSpec, angles: Sequence[float]) -> tuple[list[float], float]:
    if len(angles) != spec.D - 1:
        raise StateError(f"D={spec.D} needs {spec.D - 1} angles, got {len(angles)}")
    thetas = [float(a) for a in angles[:-1]]
    phi = float(angles[-1])
    for j, th in enumerate(thetas, start=1):
        if not 0.0 <= th <= math.pi:
            raise StateError(f"0 <= theta_{j} <= pi violated: theta_{j}={th}")
    if not 0.0 <= phi < 2.0 * math.pi:
        raise StateError(f"0 <= phi < 2 pi violated: phi={phi}")
    return thetas, phi


def log_angular_density(spec: StateSpec, angles: Sequence[float]) -> float:
    thetas, _ = _validate_angles(spec, angles)
    total = -LOG_2PI
    for factor, th in zip(angular_factors(spec), thetas, strict=True):
        total += float(factor.log_value(th))
    return total


def angular_density(spec: StateSpec, angles: Sequence[float]) -> float:
    """|Y_{l,{mu}}(Omega)|^2; the e^{i m phi} phase drops out."""
    return math.exp(log_angular_density(spec, angles))


def position_density(spec: StateSpec, r: float, angles: Sequence[float]) -> float:
    _, log_r = log_radial_position(spec, r)
    return math.exp(2.0 * float(log_r) + log_angular_density(spec, angles))


def momentum_density(spec: StateSpec, p: float, angles: Sequence[float]) -> float:
    _, log_m = log_radial_momentum(spec, p)
    return math.exp(2.0 * float(log_m) + log_angular_density(spec, angles))


def radial_position_density(spec: StateSpec, r: ArrayLike) -> NDArray[np.float64]:
    """r^(D-1) R^2(r), the probability density of the radius."""
    r = np.asarray(r, dtype=float)
    _, log_r = log_radial_position(spec, r)
    with np.errstate(divide="ignore"):
        return np.exp(2.0 * log_r + (spec.D - 1) * np.log(r))


def radial_momentum_density(spec: StateSpec, p: ArrayLike) -> NDArray[np.float64]:
    """p^(D-1) M^2(p)."""
    p = np.asarray(p, dtype=float)
    _, log_m = log_radial_momentum(spec, p)
    with np.errstate(divide="ignore"):
        return np.exp(2.0 * log_m + (spec.D - 1) * np.log(p))


def radial_nodes(spec: StateSpec) -> NDArray[np.float64]:
    """The n-l-1 interior zeros of R_{n,l} in r."""
    return derive(spec).lam * orthonormal_roots(radial_polynomial(spec))


def mean_radius(spec: StateSpec) -> float:
    """<r> = (3 eta^2 - L(L+1)) / (2 Z)."""
    d = derive(spec)
    return (3.0 * d.eta**2 - d.L * (d.L + 1.0)) / (2.0 * spec.Z)
