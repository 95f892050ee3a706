from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from functools import lru_cache

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    n_jobs: int = 1
    strict_purity: bool = False


def _env_flag(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() in {"1", "true", "yes", "on"}


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Read settings from the environment once per process."""
    try:
        n_jobs = int(os.environ.get("RHO_N_JOBS", "1"))
    except ValueError:
        n_jobs = 1
    return Settings(
        log_level=os.environ.get("RHO_LOG_LEVEL", "WARNING").upper(),
        n_jobs=max(1, n_jobs),
        strict_purity=_env_flag("RHO_STRICT_PURITY", False),
    )


def configure_logging(level: str | None = None) -> None:
    root = logging.getLogger()
    root.setLevel(level or get_settings().log_level)
    if not any(getattr(h, "_rho", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._rho = True  # type: ignore[attr-defined]
        root.addHandler(handler)
