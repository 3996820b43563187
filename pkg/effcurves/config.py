"""
Runtime settings.

Defaults live on the Settings dataclass; EFFCURVES_* environment variables
override them. get_settings() hands out one shared instance.
"""

import logging
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Settings:
    """Working precision, budgets and model choices shared by all modules."""

    precision: int = 128
    max_depth: int = 40
    workers: int = 1
    eps0: Fraction = Fraction(1, 10)
    # (2pi/3) x^3 stands in for vol(x) only up to this radius
    vol_surrogate_radius: Fraction = Fraction(1, 4)
    # "closed_form" uses anosov_T(), "rounded" uses 2*10^5
    t_pi6: str = "closed_form"
    intersection_budget: int = 200_000
    oracle_budget: int = 200_000
    box_budget: int = 250_000
    bfs_radius: int = 8
    max_precision: int = 4096
    chi_box_hi: int = 10**6
    database_path: str = "effcurves.db"

    def with_overrides(self, **changes) -> "Settings":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring %s=%r (not an integer)", name, raw)
        return default
    if value < 1:
        logger.warning("ignoring %s=%r (must be positive)", name, raw)
        return default
    return value


def settings_from_env() -> Settings:
    base = Settings()
    return base.with_overrides(
        precision=_int_env("EFFCURVES_PRECISION", base.precision),
        max_depth=_int_env("EFFCURVES_MAX_DEPTH", base.max_depth),
        workers=_int_env("EFFCURVES_WORKERS", base.workers),
    )


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = settings_from_env()
        logger.debug("settings loaded: precision=%d max_depth=%d workers=%d",
                     _settings.precision, _settings.max_depth, _settings.workers)
    return _settings


def reset_settings(settings: Optional[Settings] = None) -> None:
    """Replace (or clear, when None) the shared settings instance."""
    global _settings
    _settings = settings
