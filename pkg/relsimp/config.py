import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from pydantic import BaseSettings, validator

logger = logging.getLogger(__name__)

DEFAULT_MAX_UNIVERSE = 16
HARD_MAX_UNIVERSE = 24


class Settings(BaseSettings):
    """Runtime limits, overridable through ``RELSIMP_*`` environment variables.

    Attributes:
        max_universe: largest universe any enumeration accepts. SE-pairs
            grow as 3^n, so going past the default only makes sense for
            sparse programs.
        context_limit: ceiling for the estimated number of context programs
            a bounded operational check may enumerate.
        cache_dir: default diskcache directory for batch runs.
    """

    max_universe: int = DEFAULT_MAX_UNIVERSE
    context_limit: int = 200_000
    cache_dir: Optional[Path] = None

    class Config:
        env_prefix = "RELSIMP_"

    @validator("max_universe")
    def check_universe_cap(cls, v):
        if v < 0:
            raise ValueError("max_universe must be non-negative")
        if v > HARD_MAX_UNIVERSE:
            raise ValueError(
                f"max_universe {v} exceeds the hard cap of {HARD_MAX_UNIVERSE} atoms"
            )
        if v > DEFAULT_MAX_UNIVERSE:
            logger.warning(
                "universe cap raised to %d atoms; SE enumeration is exponential", v
            )
        return v

    @validator("context_limit")
    def check_context_limit(cls, v):
        if v < 1:
            raise ValueError("context_limit must be positive")
        return v


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


@contextmanager
def override_settings(**kwargs) -> Iterator[Settings]:
    """Temporarily replace the process-wide settings (validated)."""
    global _settings
    previous = get_settings()
    _settings = Settings(**{**previous.dict(), **kwargs})
    try:
        yield _settings
    finally:
        _settings = previous
