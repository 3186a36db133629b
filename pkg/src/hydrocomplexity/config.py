"""Runtime configuration read from the environment (and an optional .env file)."""

from __future__ import annotations

import logging
import os
import sys

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError
from .services.specfun import QuadratureConfig

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class Settings(BaseModel):
    """Tolerances, worker count and log level for a run."""

    quad_rel_tol: float = Field(default=1e-10, gt=0.0, lt=1.0)
    quad_abs_tol: float = Field(default=1e-14, gt=0.0)
    quad_limit: int = Field(default=2000, ge=1)
    workers: int = Field(default=1, ge=1)
    log_level: str = "warning"

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from HYDRO_* environment variables."""
        load_dotenv()
        try:
            return cls(
                quad_rel_tol=float(os.getenv("HYDRO_QUAD_RELTOL", "1e-10")),
                quad_abs_tol=float(os.getenv("HYDRO_QUAD_ABSTOL", "1e-14")),
                quad_limit=int(os.getenv("HYDRO_QUAD_LIMIT", "2000")),
                workers=int(os.getenv("HYDRO_WORKERS", "1")),
                log_level=os.getenv("LOG_LEVEL", "warning"),
            )
        except (ValueError, ValidationError) as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(
            rel_tol=self.quad_rel_tol,
            abs_tol=self.quad_abs_tol,
            max_subdivisions=self.quad_limit,
        )


def configure_logging(level: str = "warning") -> None:
    """Send package logs to stderr so stdout carries data only."""
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ConfigError(f"Unknown log level: {level}")
    root = logging.getLogger("hydrocomplexity")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(numeric)
