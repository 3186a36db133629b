"""Tests for ComplexityService: closed forms, decomposition, oracle and asymptotes."""

import math
import sys

import pytest
from pydantic import ValidationError

from hydrocomplexity.errors import ClosedFormUnavailable, StateError
from hydrocomplexity.services.complexity import (
    AsymptoticRequest,
    ComplexityService,
    Limit,
    Method,
    Quantity,
    Space,
    log_complexity_circular,
    log_complexity_ground,
    log_dimensional_asymptote,
)
from hydrocomplexity.services.states import StateSpec, circular_state, ground_state

E_OVER_2 = math.e / 2.0


@pytest.fixture
def service():
    return ComplexityService()


@pytest.mark.parametrize("D", [2, 3, 5, 12, 40])
def test_position_ground_complexity_is_e_over_2_to_the_d(service, D):
    report = service.closed_ground(D, 1.0, Space.POSITION)
    assert report.complexity == pytest.approx(E_OVER_2**D, rel=1e-12)


def test_hydrogen_ground_position_values(service):
    """D=3: <rho> = 1/(8 pi), S[rho] = 3 + ln pi."""
    report = service.closed_ground(3, 1.0, Space.POSITION)
    assert report.disequilibrium == pytest.approx(1.0 / (8.0 * math.pi), rel=1e-13)
    assert report.entropy_total == pytest.approx(3.0 + math.log(math.pi), rel=1e-13)
    assert report.entropy_angular == pytest.approx(math.log(4.0 * math.pi), rel=1e-13)


@pytest.mark.parametrize(
    "D, exact, rounded",
    [
        (2, 2.0 * math.exp(1.5) / 5.0, 1.7927),
        (3, 66.0 * math.exp(-10.0 / 3.0), 2.3545),
        (4, math.exp(35.0 / 12.0) / 6.0, 3.0799),
    ],
)
def test_momentum_ground_complexity(service, D, exact, rounded):
    """C[gamma] = 2e^(3/2)/5, 66 e^(-10/3) and e^(35/12)/6 for D = 2, 3, 4."""
    complexity = service.closed_ground(D, 1.0, Space.MOMENTUM).complexity
    assert complexity == pytest.approx(exact, rel=1e-12)
    assert round(complexity, 4) == rounded


@pytest.mark.parametrize(
    "D, space, expected",
    [
        (2, Space.POSITION, 1.3835),
        (3, Space.POSITION, 1.8114),
        (2, Space.MOMENTUM, 1.4509),
        (3, Space.MOMENTUM, 1.8678),
    ],
)
def test_first_circular_excited_state(service, D, space, expected):
    assert service.closed_circular(2, D, 1.0, space).complexity == pytest.approx(expected, rel=1e-3)


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize("D", [2, 3, 4, 7, 20, 150])
def test_circular_formula_reduces_to_ground(space, D):
    """n=1 of the circular expression is the ground-state expression."""
    assert log_complexity_circular(1, D, space) == pytest.approx(log_complexity_ground(D, space), abs=1e-12)


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize("n, D", [(2, 2), (3, 3), (6, 4), (15, 9), (40, 25)])
def test_direct_formula_matches_components(service, space, n, D):
    """ln C in one expression equals ln <.> + S assembled from the components."""
    report = service.closed_circular(n, D, 1.0, space)
    assembled = math.log(report.disequilibrium) + report.entropy_total
    assert log_complexity_circular(n, D, space) == pytest.approx(assembled, abs=1e-10)


def test_log_complexity_beyond_double_range():
    """ln C stays finite where C itself would overflow."""
    value = log_complexity_circular(3, 5000, Space.POSITION)
    assert math.isfinite(value)
    assert value > math.log(sys.float_info.max)
    assert math.isfinite(log_complexity_circular(400, 300, Space.MOMENTUM))


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize("Z", [0.5, 2.0, 137.0])
def test_complexity_does_not_depend_on_charge(service, space, Z):
    base = service.closed_circular(3, 4, 1.0, space)
    scaled = service.closed_circular(3, 4, Z, space)
    assert scaled.complexity == pytest.approx(base.complexity, rel=1e-12)
    sign = 1.0 if space is Space.POSITION else -1.0
    assert scaled.entropy_total == pytest.approx(base.entropy_total - sign * 4 * math.log(Z), abs=1e-12)


def test_functional_complexity_is_charge_free(service):
    spec = StateSpec(D=3, n=3, mu=(1, 0))
    base = service.functional(spec, Space.MOMENTUM)
    scaled = service.functional(spec.with_charge(3.0), Space.MOMENTUM)
    assert scaled.complexity == pytest.approx(base.complexity, rel=1e-7)


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize("n, D", [(1, 3), (2, 3), (3, 2), (2, 5)])
def test_three_methods_agree_on_circular_states(service, space, n, D):
    spec = circular_state(n, D, 1.3)
    closed = service.closed_form(spec, space)
    functional = service.functional(spec, space)
    oracle = service.direct_oracle(spec, space)
    assert functional.complexity == pytest.approx(closed.complexity, rel=1e-7)
    assert oracle.complexity == pytest.approx(closed.complexity, rel=1e-7)
    assert functional.entropy_angular == pytest.approx(closed.entropy_angular, abs=1e-8)
    assert oracle.entropy_radial == pytest.approx(closed.entropy_radial, abs=1e-8)


@pytest.mark.slow
@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize("D", range(2, 9))
@pytest.mark.parametrize("n", range(1, 6))
def test_three_methods_agree_full_grid(service, space, n, D):
    """Ground and circular states n <= 5, D = 2..8, within 1e-6."""
    spec = circular_state(n, D)
    closed = service.closed_form(spec, space).complexity
    assert service.functional(spec, space).complexity == pytest.approx(closed, rel=1e-6)
    assert service.direct_oracle(spec, space).complexity == pytest.approx(closed, rel=1e-6)


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize(
    "spec",
    [StateSpec(D=3, n=3, mu=(1, 0)), StateSpec(D=4, n=3, mu=(1, 1, 0)), StateSpec(D=5, n=4, mu=(2, 1, 1, 0))],
)
def test_functional_matches_oracle_for_excited_states(service, space, spec):
    functional = service.functional(spec, space)
    oracle = service.direct_oracle(spec, space)
    assert functional.converged and oracle.converged
    assert functional.disequilibrium == pytest.approx(oracle.disequilibrium, rel=1e-7)
    assert functional.entropy_total == pytest.approx(oracle.entropy_total, abs=1e-7)


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize(
    "spec",
    [StateSpec(D=3, n=2, mu=(0, 0)), StateSpec(D=5, n=3, mu=(0, 0, 0, 0)), StateSpec(D=4, n=4, mu=(1, 0, 0))],
)
def test_states_with_radial_nodes_converge(service, space, spec):
    """Decomposition and oracle both converge once the radial polynomial has zeros."""
    functional = service.measure(spec, space)
    oracle = service.direct_oracle(spec, space)
    assert functional.method is Method.FUNCTIONAL
    assert functional.converged and oracle.converged
    assert functional.complexity == pytest.approx(oracle.complexity, rel=1e-7)


def test_oracle_converges_on_small_radial_disequilibrium(service):
    """D=7, n=3: the radial integral of R^4 is of order 1e-10."""
    spec = circular_state(3, 7)
    oracle = service.direct_oracle(spec, Space.POSITION)
    closed = service.closed_form(spec, Space.POSITION)
    assert oracle.converged
    assert oracle.disequilibrium == pytest.approx(closed.disequilibrium, rel=1e-8)
    assert oracle.complexity == pytest.approx(closed.complexity, rel=1e-7)

def test_auto_dispatch(service):
    assert service.measure(ground_state(4), Space.POSITION).method is Method.CLOSED_FORM
    assert service.measure(circular_state(3, 3), Space.MOMENTUM).method is Method.CLOSED_FORM
    assert service.measure(StateSpec(D=3, n=2, mu=(0, 0)), Space.POSITION).method is Method.FUNCTIONAL


def test_report_carries_formulas_and_refs(service):
    report = service.measure(StateSpec(D=3, n=2, mu=(0, 0)), Space.MOMENTUM, Method.FUNCTIONAL)
    assert any("K3" in f for f in report.formulas)
    assert report.paper_refs == ("Cmom", "K3", "K2", "Sgamma", "F1", "SY", "E2", "CmomFinal")
    assert service.closed_circular(3, 4).paper_refs == ("DposCS", "SposCS", "A2", "CposCS")
    assert "Drho" in service.direct_oracle(ground_state(3), Space.POSITION).paper_refs
    assert report.error_estimate >= 0.0


def test_closed_form_unavailable_for_other_states(service):
    with pytest.raises(ClosedFormUnavailable, match="only ground and circular"):
        service.closed_form(StateSpec(D=3, n=3, mu=(1, 0)), Space.POSITION)


@pytest.mark.parametrize("space", list(Space))
def test_complexity_decreases_in_n_and_grows_in_d(service, space):
    c = {(n, D): service.closed_circular(n, D, space=space).complexity for n in (1, 2, 3) for D in (2, 3, 4, 6)}
    for D in (2, 3, 4, 6):
        assert c[(3, D)] < c[(2, D)] < c[(1, D)]
    for n in (1, 2, 3):
        assert c[(n, 2)] < c[(n, 3)] < c[(n, 4)] < c[(n, 6)]


def test_hydrogen_uncertainty_product(service):
    """(e/2)^3 times the momentum ground complexity."""
    assert service.uncertainty_product(ground_state(3)) == pytest.approx(5.9114, rel=1e-3)


@pytest.mark.parametrize("n", [1, 2, 5, 15])
@pytest.mark.parametrize("D", [2, 3, 7, 10])
def test_uncertainty_product_bound(service, n, D):
    assert service.uncertainty_product((n, D)) >= E_OVER_2


@pytest.mark.parametrize(
    "D, quantity, expected",
    [
        (3, Quantity.POS_COMPLEXITY, E_OVER_2),
        (3, Quantity.MOM_COMPLEXITY, E_OVER_2),
        (3, Quantity.PRODUCT, E_OVER_2**2),
        (2, Quantity.PRODUCT, E_OVER_2),
    ],
)
def test_rydberg_asymptote_values(service, D, quantity, expected):
    result = service.asymptotic(AsymptoticRequest(limit=Limit.RYDBERG, quantity=quantity, D=D))
    assert result.value == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("quantity", [Quantity.POS_COMPLEXITY, Quantity.MOM_COMPLEXITY])
@pytest.mark.parametrize("D", [2, 3])
def test_rydberg_limit_is_approached(service, quantity, D):
    row = service.limit_row(AsymptoticRequest(limit=Limit.RYDBERG, quantity=quantity, n=200, D=D))
    assert row.ratio == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("quantity", list(Quantity))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_dimensional_limit_is_approached(service, quantity, n):
    row = service.limit_row(AsymptoticRequest(limit=Limit.DIMENSIONAL, quantity=quantity, n=n, D=200))
    assert row.log_ratio == pytest.approx(1.0, abs=0.05)


def test_dimensional_position_ground_asymptote_is_exact():
    for D in (5, 50, 500):
        assert log_dimensional_asymptote(1, D, Quantity.POS_COMPLEXITY) == pytest.approx(D * (1.0 - math.log(2.0)))


def test_dimensional_momentum_ground_asymptote_form():
    """At n=1: 3^(3(D+1)/2) / (2^(2D+3/2) sqrt(e))."""
    D = 17
    expected = 1.5 * (D + 1) * math.log(3.0) - (2 * D + 1.5) * math.log(2.0) - 0.5
    assert log_dimensional_asymptote(1, D, Quantity.MOM_COMPLEXITY) == pytest.approx(expected, abs=1e-12)


def test_asymptote_overflow_gives_no_linear_value(service):
    result = service.asymptotic(AsymptoticRequest(limit=Limit.DIMENSIONAL, quantity=Quantity.PRODUCT, n=2, D=5000))
    assert result.value is None
    assert math.isfinite(result.log_value)


def test_asymptotic_request_validation():
    with pytest.raises(ValidationError, match="needs D"):
        AsymptoticRequest(limit=Limit.RYDBERG, quantity=Quantity.PRODUCT)
    with pytest.raises(ValidationError, match="fixed n"):
        AsymptoticRequest(limit=Limit.DIMENSIONAL, quantity=Quantity.PRODUCT, D=10)


def test_limit_row_needs_n(service):
    with pytest.raises(StateError):
        service.limit_row(AsymptoticRequest(limit=Limit.RYDBERG, quantity=Quantity.PRODUCT, D=3))
