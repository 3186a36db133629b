"""Exceptions raised by the hydrogenic complexity services."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .services.specfun import QuadratureResult


class HydroError(Exception):
    """Base class for every error raised by this package."""


class StateError(HydroError, ValueError):
    """Invalid quantum numbers, angles or asymptotic request."""


class DomainError(HydroError, ValueError):
    """Special function evaluated outside its domain."""


class ConfigError(HydroError, ValueError):
    """Invalid configuration value."""


class ClosedFormUnavailable(HydroError, LookupError):
    """Closed form requested for a state that is neither ground nor circular."""


class ConvergenceError(HydroError, RuntimeError):
    """An integral did not reach its tolerance within the subdivision budget."""

    def __init__(self, what: str, result: "QuadratureResult") -> None:
        super().__init__(
            f"Quadrature for {what} did not converge "
            f"(value={result.value:.6g}, error estimate={result.error_estimate:.3g})"
        )
        self.what = what
        self.result = result
