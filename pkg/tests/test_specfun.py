"""Tests for special functions, orthonormal polynomials and quadrature."""

import math

import mpmath
import numpy as np
import pytest
from scipy import special

from hydrocomplexity.errors import DomainError
from hydrocomplexity.services.specfun import (
    OrthoPolySpec,
    QuadratureConfig,
    QuadratureResult,
    digamma,
    eval_orthonormal,
    integrate,
    ln_gamma,
    log_classical_norm,
    log_orthonormal,
    orthonormal_roots,
    xlogx_density,
)
from hydrocomplexity.services.validation import gram_matrix

EULER = 0.5772156649015329


@pytest.mark.parametrize(
    "x, expected",
    [(1.0, 0.0), (0.5, 0.5 * math.log(math.pi)), (10.0, math.log(362880.0))],
)
def test_ln_gamma_values(x, expected):
    """ln Gamma at 1, 1/2 and 10."""
    assert ln_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-15)


@pytest.mark.parametrize(
    "x, expected",
    [(1.0, -EULER), (2.0, 1.0 - EULER), (0.5, -EULER - 2.0 * math.log(2.0))],
)
def test_digamma_values(x, expected):
    """psi at 1, 2 and 1/2."""
    assert digamma(x) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("func", [ln_gamma, digamma])
@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_gamma_functions_reject_nonpositive(func, x):
    """ln_gamma and digamma are only defined for x > 0."""
    with pytest.raises(DomainError):
        func(x)


@pytest.mark.parametrize(
    "family_kwargs",
    [
        {"family": "laguerre", "degree": 2, "parameter": -1.0},
        {"family": "gegenbauer", "degree": 2, "parameter": -0.5},
        {"family": "gegenbauer", "degree": 2, "parameter": 0.0},
        {"family": "laguerre", "degree": -1, "parameter": 1.0},
    ],
)
def test_orthopoly_spec_rejects_bad_parameters(family_kwargs):
    """Parameter ranges of both families are enforced."""
    with pytest.raises(ValueError):
        OrthoPolySpec(**family_kwargs)


@pytest.mark.parametrize("alpha", [0.0, 1.5, 12.0])
def test_laguerre_degree_zero(alpha):
    """Degree-0 orthonormal Laguerre is Gamma(alpha+1)^-1/2 everywhere."""
    spec = OrthoPolySpec.laguerre(0, alpha)
    expected = math.exp(-0.5 * math.lgamma(alpha + 1.0))
    for x in (0.0, 0.7, 42.0):
        assert eval_orthonormal(spec, x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("lam", [0.5, 1.0, 3.25])
def test_gegenbauer_degree_zero(lam):
    """Degree-0 orthonormal Gegenbauer is [sqrt(pi) Gamma(lam+1/2) / Gamma(lam+1)]^-1/2."""
    spec = OrthoPolySpec.gegenbauer(0, lam)
    h0 = math.sqrt(math.pi) * math.gamma(lam + 0.5) / math.gamma(lam + 1.0)
    assert eval_orthonormal(spec, -0.3) == pytest.approx(h0**-0.5, rel=1e-14)


def test_laguerre_matches_series_expansion():
    """Laguerre k=5, alpha=2.5 at x=3.7 against the high-precision series."""
    mpmath.mp.dps = 40
    k, alpha, x = 5, 2.5, 3.7
    classical = mpmath.laguerre(k, alpha, x)
    norm = mpmath.sqrt(mpmath.gamma(k + alpha + 1) / mpmath.factorial(k))
    expected = float(classical / norm)
    assert eval_orthonormal(OrthoPolySpec.laguerre(k, alpha), x) == pytest.approx(
        expected, rel=1e-10
    )


@pytest.mark.parametrize("k, lam, x", [(1, 0.75, 0.4), (4, 2.0, -0.55), (9, 5.5, 0.91)])
def test_gegenbauer_matches_mpmath(k, lam, x):
    """Orthonormal Gegenbauer against mpmath with the classical norm."""
    mpmath.mp.dps = 40
    h = (
        mpmath.pi
        * mpmath.power(2, 1 - 2 * lam)
        * mpmath.gamma(k + 2 * lam)
        / (mpmath.factorial(k) * (k + lam) * mpmath.gamma(lam) ** 2)
    )
    expected = float(mpmath.gegenbauer(k, lam, x) / mpmath.sqrt(h))
    assert eval_orthonormal(OrthoPolySpec.gegenbauer(k, lam), x) == pytest.approx(
        expected, rel=1e-10
    )


def test_log_classical_norm_laguerre():
    """h_k = Gamma(k+alpha+1) / k! for Laguerre."""
    spec = OrthoPolySpec.laguerre(7, 3.5)
    expected = math.lgamma(7 + 3.5 + 1) - math.lgamma(8)
    assert log_classical_norm(spec) == pytest.approx(expected, rel=1e-13)


def test_log_orthonormal_large_degree_and_parameter():
    """No overflow or underflow at degree 60 and parameter 40.5, matching mpmath in log form."""
    mpmath.mp.dps = 60
    k, alpha, x = 60, 40.5, 75.0
    sign, log_abs = log_orthonormal(OrthoPolySpec.laguerre(k, alpha), x)
    classical = mpmath.laguerre(k, alpha, x)
    log_norm = 0.5 * (mpmath.loggamma(k + alpha + 1) - mpmath.loggamma(k + 1))
    expected = float(mpmath.log(abs(classical)) - log_norm)
    assert math.isfinite(float(log_abs))
    assert float(sign) == float(mpmath.sign(classical))
    assert float(log_abs) == pytest.approx(expected, abs=1e-8)


def test_log_orthonormal_extreme_arguments_stay_finite():
    """Degree 200, parameter 500 stays representable in log form."""
    spec = OrthoPolySpec.laguerre(200, 500.0)
    sign, log_abs = log_orthonormal(spec, np.array([1.0, 600.0, 5000.0]))
    assert np.all(np.isfinite(log_abs))
    assert set(np.unique(sign)) <= {-1.0, 1.0}


def test_vector_and_scalar_paths_agree():
    """The scalar fast path gives the same numbers as the vectorised recurrence."""
    spec = OrthoPolySpec.gegenbauer(11, 1.75)
    xs = np.linspace(-0.95, 0.95, 7)
    signs, logs = log_orthonormal(spec, xs)
    for x, s, la in zip(xs, signs, logs, strict=True):
        s1, la1 = log_orthonormal(spec, float(x))
        assert float(s1) == s
        assert float(la1) == pytest.approx(la, rel=1e-13, abs=1e-13)


def test_eval_orthonormal_rejects_outside_domain():
    """Gegenbauer is evaluated on [-1, 1] only, Laguerre on [0, inf)."""
    with pytest.raises(DomainError):
        eval_orthonormal(OrthoPolySpec.gegenbauer(2, 1.0), 1.5)
    with pytest.raises(DomainError):
        eval_orthonormal(OrthoPolySpec.laguerre(2, 1.0), -0.1)


@pytest.mark.parametrize("k, alpha", [(1, 1.0), (6, 0.5), (25, 7.0)])
def test_laguerre_roots_match_scipy(k, alpha):
    """Root finder agrees with the Golub-Welsch nodes."""
    expected, _ = special.roots_genlaguerre(k, alpha)
    roots = orthonormal_roots(OrthoPolySpec.laguerre(k, alpha))
    assert len(roots) == k
    np.testing.assert_allclose(roots, np.sort(expected), rtol=1e-9)


@pytest.mark.parametrize("k, lam", [(1, 1.5), (7, 0.6), (20, 4.0)])
def test_gegenbauer_roots_match_scipy(k, lam):
    expected, _ = special.roots_gegenbauer(k, lam)
    roots = orthonormal_roots(OrthoPolySpec.gegenbauer(k, lam))
    np.testing.assert_allclose(roots, np.sort(expected), rtol=1e-9, atol=1e-12)


def test_degree_zero_has_no_roots():
    assert orthonormal_roots(OrthoPolySpec.laguerre(0, 2.0)).size == 0


@pytest.mark.parametrize(
    "f, interval, expected",
    [
        (lambda x: math.exp(-x), (0.0, math.inf), 1.0),
        (lambda x: math.log(x), (0.0, 1.0), -1.0),
        (lambda x: x**3 * math.exp(-2.0 * x), (0.0, math.inf), 3.0 / 8.0),
    ],
)
def test_integrate_reference_integrals(f, interval, expected):
    """Semi-infinite and log-singular integrals converge within tolerance."""
    config = QuadratureConfig()
    result = integrate(f, interval, config)
    assert result.converged
    assert result.value == pytest.approx(expected, rel=1e-10)
    assert result.error_estimate <= max(config.abs_tol, config.rel_tol * abs(result.value))


def test_integrate_with_split_points_on_infinite_interval():
    """Split points are honoured on a semi-infinite interval."""
    config = QuadratureConfig().with_splits([0.5, 2.0, 7.5])
    result = integrate(lambda x: x * math.exp(-x), (0.0, math.inf), config)
    assert result.converged
    assert result.value == pytest.approx(1.0, rel=1e-10)



def test_integrate_log_spike_at_last_split_point():
    """A zero of the log factor at the last split point, with pieces of both signs."""

    def f(x):
        u = (x - 3.0) ** 2
        return 0.0 if u == 0.0 else -u * math.log(u) * math.exp(-x)

    with mpmath.workdps(30):
        expected = float(
            mpmath.quad(lambda x: -((x - 3) ** 2) * mpmath.log((x - 3) ** 2) * mpmath.exp(-x), [0, 3, mpmath.inf])
        )
    config = QuadratureConfig().with_splits([3.0])
    result = integrate(f, (0.0, math.inf), config)
    assert result.converged
    assert result.value == pytest.approx(expected, rel=1e-9)


def test_integrate_small_total_of_cancelling_pieces():
    """int (x - 0.9) e^-x = 0.1 while the two pieces have opposite signs."""
    config = QuadratureConfig().with_splits([1.0])
    result = integrate(lambda x: (x - 0.9) * math.exp(-x), (0.0, math.inf), config)
    assert result.converged
    assert result.value == pytest.approx(0.1, rel=1e-10)

def test_integrate_reversed_limits():
    result = integrate(lambda x: math.exp(-x), (1.0, 0.0))
    assert result.value == pytest.approx(-(1.0 - math.exp(-1.0)), rel=1e-12)


def test_integrate_divergent_reports_instead_of_raising():
    """A divergent integral comes back converged=False."""
    result = integrate(lambda x: 1.0 / x, (0.0, 1.0))
    assert isinstance(result, QuadratureResult)
    assert not result.converged


def test_xlogx_density_zero_convention():
    """0 ln 0 = 0 below the density floor."""
    assert xlogx_density(math.log(1e-320)) == 0.0
    assert xlogx_density(math.log(0.5)) == pytest.approx(0.5 * math.log(0.5))
    out = xlogx_density(np.array([-np.inf, 0.0]))
    np.testing.assert_array_equal(out, [0.0, 0.0])


@pytest.mark.parametrize(
    "spec",
    [OrthoPolySpec.laguerre(4, 1.0), OrthoPolySpec.gegenbauer(4, 2.5)],
)
def test_gram_matrix_small(spec):
    """Orthonormality up to degree 4."""
    np.testing.assert_allclose(gram_matrix(spec), np.eye(5), atol=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize(
    "spec",
    [OrthoPolySpec.laguerre(12, a) for a in (0.5, 1.0, 3.0, 10.5)]
    + [OrthoPolySpec.gegenbauer(12, lam) for lam in (0.6, 1.0, 2.5, 7.0)],
)
def test_gram_matrix_full(spec):
    """Orthonormality grid of degrees 0..12."""
    np.testing.assert_allclose(gram_matrix(spec), np.eye(13), atol=1e-9)


def test_digamma_recurrence():
    """psi(x+1) - psi(x) = 1/x on [0.1, 100]."""
    for x in np.geomspace(0.1, 100.0, 40):
        assert digamma(x + 1.0) - digamma(x) == pytest.approx(1.0 / x, abs=1e-12)


def test_ln_gamma_duplication():
    """Gamma(2x) = Gamma(x) Gamma(x+1/2) 2^(2x-1) / sqrt(pi) on [0.5, 50]."""
    for x in np.linspace(0.5, 50.0, 60):
        rhs = ln_gamma(x) + ln_gamma(x + 0.5) + (2.0 * x - 1.0) * math.log(2.0) - 0.5 * math.log(math.pi)
        assert ln_gamma(2.0 * x) == pytest.approx(rhs, abs=1e-11)
