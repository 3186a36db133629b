"""Self-validation suite behind `hydrocomplexity validate`.

Each check returns a CheckResult instead of raising, so one failing check
never hides the others. `quick=True` restricts the state grids to D <= 4 and
n <= 2.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator
from itertools import pairwise

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..errors import HydroError
from . import functionals as fn
from .complexity import (
    AsymptoticRequest,
    ComplexityService,
    Limit,
    Method,
    Quantity,
    Space,
)
from .specfun import OrthoPolySpec, QuadratureConfig, integrate, log_orthonormal, orthonormal_roots
from .states import (
    StateSpec,
    circular_state,
    derive,
    mean_radius,
    momentum_polynomial,
    radial_momentum_density,
    radial_nodes,
    radial_position,
    radial_position_density,
)

logger = logging.getLogger(__name__)

E_OVER_2 = math.e / 2.0
CHARGES = (0.5, 1.0, 2.0, 10.0, 137.0)
# Exact C[gamma] of the ground state; to four decimals 1.7927, 2.3545 and 3.0799.
GROUND_MOMENTUM_VALUES = {
    2: 2.0 * math.exp(1.5) / 5.0,
    3: 66.0 * math.exp(-10.0 / 3.0),
    4: math.exp(35.0 / 12.0) / 6.0,
}

# Non-circular states exercising nonzero polynomial degrees everywhere.
EXCITED_STATES = (
    StateSpec(D=3, n=3, mu=(1, 0)),
    StateSpec(D=3, n=4, mu=(2, -1)),
    StateSpec(D=4, n=3, mu=(1, 1, 0)),
    StateSpec(D=5, n=4, mu=(2, 1, 1, 0)),
)


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    detail: str


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    quick: bool
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def _verdict(name: str, failures: list[str], cases: int) -> CheckResult:
    if failures:
        shown = "; ".join(failures[:3])
        more = f" (+{len(failures) - 3} more)" if len(failures) > 3 else ""
        return CheckResult(name=name, passed=False, detail=f"{len(failures)}/{cases} failed: {shown}{more}")
    return CheckResult(name=name, passed=True, detail=f"{cases} cases")


def _dimensions(quick: bool) -> range:
    return range(2, 5) if quick else range(2, 9)


def _circular_grid(quick: bool) -> Iterator[StateSpec]:
    max_n = 2 if quick else 5
    for D in _dimensions(quick):
        for n in range(1, max_n + 1):
            yield circular_state(n, D)


def gram_matrix(spec: OrthoPolySpec, config: QuadratureConfig | None = None) -> np.ndarray:
    """Gram matrix of the orthonormal polynomials of degree 0..spec.degree under the weight."""
    config = (config or QuadratureConfig()).with_splits(orthonormal_roots(spec))
    size = spec.degree + 1
    polys = [spec.model_copy(update={"degree": k}) for k in range(size)]
    gram = np.zeros((size, size))
    for i in range(size):
        for j in range(i, size):

            def integrand(x: float, a: OrthoPolySpec = polys[i], b: OrthoPolySpec = polys[j]) -> float:
                sa, la = log_orthonormal(a, x)
                sb, lb = log_orthonormal(b, x)
                lw = float(spec.log_weight(x))
                if not math.isfinite(lw + la + lb):
                    return 0.0
                return float(sa * sb) * math.exp(lw + la + lb)

            gram[i, j] = gram[j, i] = integrate(integrand, spec.interval, config).value
    return gram


def check_orthonormality(service: ComplexityService, quick: bool) -> CheckResult:
    degree = 6 if quick else 12
    specs = [OrthoPolySpec.laguerre(degree, a) for a in (0.5, 1.0, 3.0, 10.5)]
    specs += [OrthoPolySpec.gegenbauer(degree, lam) for lam in (0.6, 1.0, 2.5, 7.0)]
    failures = []
    for spec in specs:
        deviation = float(np.max(np.abs(gram_matrix(spec, service.quadrature) - np.eye(degree + 1))))
        if deviation > 1e-9:
            failures.append(f"{spec.family.value}({spec.parameter:g}) off by {deviation:.2e}")
    return _verdict("orthonormality", failures, len(specs))


def check_normalization(service: ComplexityService, quick: bool) -> CheckResult:
    states = list(_circular_grid(quick)) + list(EXCITED_STATES[: 1 if quick else None])
    failures = []
    for spec in states:
        d = derive(spec)
        y_roots = orthonormal_roots(momentum_polynomial(spec))
        p_nodes = spec.Z / d.eta * np.sqrt((1.0 - y_roots) / (1.0 + y_roots))
        pos = integrate(
            lambda r, s=spec: float(radial_position_density(s, r)),
            (0.0, math.inf),
            service.quadrature.with_splits(np.append(radial_nodes(spec), mean_radius(spec))),
        )
        mom = integrate(
            lambda p, s=spec: float(radial_momentum_density(s, p)),
            (0.0, math.inf),
            service.quadrature.with_splits(np.append(p_nodes, spec.Z / d.eta)),
        )
        for space, result in (("position", pos), ("momentum", mom)):
            if abs(result.value - 1.0) > 1e-8:
                failures.append(f"{spec.label()} {space}: {result.value:.12g}")
    return _verdict("density normalization", failures, 2 * len(states))


def check_ground_values(service: ComplexityService, quick: bool) -> CheckResult:
    failures = []
    for D, expected in GROUND_MOMENTUM_VALUES.items():
        c = service.closed_ground(D, space=Space.MOMENTUM).complexity
        if _relative(c, expected) > 1e-12:
            failures.append(f"C[gamma] D={D}: {c!r} != {expected!r}")
    for D in range(2, 11):
        c = service.closed_ground(D, space=Space.POSITION).complexity
        if _relative(c, E_OVER_2**D) > 1e-12:
            failures.append(f"C[rho] D={D}: {c!r} != (e/2)^{D}")
    return _verdict("ground-state values", failures, len(GROUND_MOMENTUM_VALUES) + 9)


def check_disequilibrium_gate(service: ComplexityService, quick: bool) -> CheckResult:
    """Assembled <rho> against the closed form; fails with the printed K1 exponent."""
    failures = []
    states = list(_circular_grid(quick))
    for spec in states:
        expected = service.closed_form(spec, Space.POSITION).disequilibrium
        try:
            got = fn.position_disequilibrium(spec, service.quadrature, service.k1_exponent).value
        except HydroError as e:
            failures.append(f"{spec.label()}: {e}")
            continue
        if _relative(got, expected) > 1e-8:
            failures.append(f"{spec.label()}: {got:.10g} != {expected:.10g}")
    return _verdict(f"position disequilibrium (K1 {service.k1_exponent.value})", failures, len(states))


def check_reduction(service: ComplexityService, quick: bool) -> CheckResult:
    failures = []
    for D in range(2, 11):
        for space in Space:
            circ = service.closed_circular(1, D, space=space)
            ground = service.closed_ground(D, space=space)
            if _relative(circ.complexity, ground.complexity) > 1e-12 or _relative(
                circ.disequilibrium, ground.disequilibrium
            ) > 1e-12:
                failures.append(f"D={D} {space.value}")
    return _verdict("n=1 circular reduces to ground", failures, 18)


def check_charge_scaling(service: ComplexityService, quick: bool) -> CheckResult:
    states = list(_circular_grid(quick))
    failures = []
    for spec in states:
        for space in Space:
            sign = -1.0 if space is Space.POSITION else 1.0
            base = service.closed_form(spec, space)
            for Z in CHARGES:
                other = service.closed_form(spec.with_charge(Z), space)
                shift = other.entropy_total - base.entropy_total - sign * spec.D * math.log(Z)
                scale = other.disequilibrium / base.disequilibrium / Z ** (-sign * spec.D)
                if (
                    _relative(other.complexity, base.complexity) > 1e-10
                    or abs(shift) > 1e-10
                    or abs(scale - 1.0) > 1e-10
                ):
                    failures.append(f"{spec.label()} {space.value} Z={Z:g}")
    return _verdict("Z invariance and covariance", failures, 2 * len(states) * len(CHARGES))


def check_three_way(service: ComplexityService, quick: bool) -> CheckResult:
    states = list(_circular_grid(quick))
    failures = []
    for spec in states:
        for space in Space:
            closed = service.measure(spec, space, Method.CLOSED_FORM).complexity
            for method in (Method.FUNCTIONAL, Method.DIRECT_ORACLE):
                got = service.measure(spec, space, method).complexity
                if _relative(got, closed) > 1e-6:
                    failures.append(f"{spec.label()} {space.value} {method.value}: {got:.10g} vs {closed:.10g}")
    return _verdict("closed form vs functional vs oracle", failures, 2 * len(states))


def check_entropy_decomposition(service: ComplexityService, quick: bool) -> CheckResult:
    states = EXCITED_STATES[:1] if quick else EXCITED_STATES
    failures = []
    for spec in states:
        for space in Space:
            functional = service.measure(spec, space, Method.FUNCTIONAL)
            oracle = service.measure(spec, space, Method.DIRECT_ORACLE)
            if abs(functional.entropy_total - oracle.entropy_total) > 1e-7:
                failures.append(
                    f"{spec.label()} {space.value}: {functional.entropy_total:.10g} vs {oracle.entropy_total:.10g}"
                )
            if _relative(functional.disequilibrium, oracle.disequilibrium) > 1e-6:
                failures.append(f"{spec.label()} {space.value} disequilibrium")
    return _verdict("entropy decomposition vs oracle", failures, 2 * len(states))


def check_angular_entropy(service: ComplexityService, quick: bool) -> CheckResult:
    cases = {
        StateSpec(D=2, n=1, mu=(0,)): math.log(2.0 * math.pi),
        StateSpec(D=3, n=2, mu=(0, 0)): math.log(4.0 * math.pi),
    }
    failures = [
        spec.label()
        for spec, expected in cases.items()
        if abs(fn.angular_entropy(spec, service.quadrature).value - expected) > 1e-10
    ]
    return _verdict("S[Y] of l=0 states", failures, len(cases))


def check_radial_nodes(service: ComplexityService, quick: bool) -> CheckResult:
    failures = []
    for spec in EXCITED_STATES + (StateSpec(D=3, n=3, mu=(0, 0)),):
        nodes = radial_nodes(spec)
        if len(nodes) != spec.n - spec.l - 1:
            failures.append(f"{spec.label()}: {len(nodes)} nodes")
            continue
        edges = np.concatenate(([0.0], nodes, [2.0 * nodes[-1] + 1.0 if len(nodes) else 1.0]))
        signs = np.sign(radial_position(spec, 0.5 * (edges[:-1] + edges[1:])))
        if np.any(signs[:-1] * signs[1:] >= 0):
            failures.append(f"{spec.label()}: no sign change at a node")
    return _verdict("radial node count", failures, len(EXCITED_STATES) + 1)


def check_ordering(service: ComplexityService, quick: bool) -> CheckResult:
    failures = []
    table = {
        space: {
            (n, D): service.closed_circular(n, D, space=space).complexity
            for n in (1, 2, 3)
            for D in range(2, 11)
        }
        for space in Space
    }
    for space, c in table.items():
        for D in range(2, 11):
            if not c[(3, D)] < c[(2, D)] < c[(1, D)]:
                failures.append(f"{space.value} D={D}: not decreasing in n")
        for n in (1, 2, 3):
            if any(c[(n, D + 1)] <= c[(n, D)] for D in range(2, 10)):
                failures.append(f"{space.value} n={n}: not increasing in D")
    for D in (2, 5, 15):
        series = [service.closed_circular(n, D).complexity for n in range(1, 16)]
        if any(b >= a for a, b in pairwise(series)):
            failures.append(f"position D={D}: not decreasing for n = 1..15")
    # Lowest complexity over D of the ground state sits at D=2.
    minima = ((Space.POSITION, E_OVER_2**2), (Space.MOMENTUM, GROUND_MOMENTUM_VALUES[2]))
    for space, expected in minima:
        minimum = min(table[space][(1, D)] for D in range(2, 11))
        if _relative(minimum, expected) > 1e-10:
            failures.append(f"{space.value} ground minimum {minimum:.6f}")
    return _verdict("ordering in n and D", failures, 2 * (9 + 3) + 3 + 2)


def check_uncertainty_bound(service: ComplexityService, quick: bool) -> CheckResult:
    failures = []
    cases = 0
    for D in range(2, 11):
        for n in range(1, 16):
            cases += 1
            product = service.uncertainty_product((n, D), Method.CLOSED_FORM)
            if product < E_OVER_2:
                failures.append(f"n={n} D={D}: {product:.6f}")
    return _verdict("C[rho] C[gamma] >= e/2", failures, cases)


def check_limits(service: ComplexityService, quick: bool) -> CheckResult:
    failures = []
    for D in (2, 3):
        for quantity in (Quantity.POS_COMPLEXITY, Quantity.MOM_COMPLEXITY):
            row = service.limit_row(AsymptoticRequest(limit=Limit.RYDBERG, quantity=quantity, n=200, D=D))
            if row.ratio is None or abs(row.ratio - 1.0) > 0.02:
                failures.append(f"rydberg {quantity.value} D={D}: ratio {row.ratio}")
    for n in (1, 2, 3):
        for quantity in Quantity:
            row = service.limit_row(AsymptoticRequest(limit=Limit.DIMENSIONAL, quantity=quantity, n=n, D=200))
            if abs(row.log_ratio - 1.0) > 0.05:
                failures.append(f"dimensional {quantity.value} n={n}: log ratio {row.log_ratio:.4f}")
    product = service.asymptotic(AsymptoticRequest(limit=Limit.RYDBERG, quantity=Quantity.PRODUCT, D=2))
    if product.value is None or _relative(product.value, E_OVER_2) > 1e-12:
        failures.append(f"rydberg product D=2: {product.value}")
    return _verdict("asymptotic limits", failures, 4 + 9 + 1)


CHECKS: tuple[Callable[[ComplexityService, bool], CheckResult], ...] = (
    check_orthonormality,
    check_normalization,
    check_ground_values,
    check_disequilibrium_gate,
    check_reduction,
    check_charge_scaling,
    check_three_way,
    check_entropy_decomposition,
    check_angular_entropy,
    check_radial_nodes,
    check_ordering,
    check_uncertainty_bound,
    check_limits,
)


def run_validation(service: ComplexityService, quick: bool = False) -> ValidationReport:
    results = []
    for check in CHECKS:
        name = check.__name__.removeprefix("check_")
        try:
            result = check(service, quick)
        except HydroError as e:
            result = CheckResult(name=name, passed=False, detail=str(e))
        if not result.passed:
            logger.warning("validation check %s failed: %s", result.name, result.detail)
        results.append(result)
    return ValidationReport(quick=quick, checks=tuple(results))
