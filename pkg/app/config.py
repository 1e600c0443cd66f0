# File: app/config.py
import os
from functools import lru_cache

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(float(raw))
    except ValueError as exc:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}") from exc


class Settings:
    """Runtime settings loaded from environment variables.

    Nothing is required: every budget has a desk-scale default and the
    command line overrides what it names.
    """

    def __init__(self) -> None:
        self.PROJECT_NAME: str = "entropy-numbers"
        self.DATABASE_URL: str = os.getenv("ENTROPY_DATABASE_URL", "sqlite:///entropy_runs.db")
        self.LOG_LEVEL: str = os.getenv("ENTROPY_LOG_LEVEL", "WARNING").upper()

        self.MAX_CENTERS: int = _int_env("ENTROPY_MAX_CENTERS", 10_000_000)
        self.MAX_GAMMA_M: int = _int_env("ENTROPY_MAX_GAMMA_M", 14)
        self.MAX_BLOCK_M: int = _int_env("ENTROPY_MAX_BLOCK_M", 10)
        self.MAX_DIMENSION: int = _int_env("ENTROPY_MAX_DIMENSION", 16)
        self.MAX_INDEX: int = _int_env("ENTROPY_MAX_INDEX", 14)
        self.AUDIT_SAMPLES: int = _int_env("ENTROPY_AUDIT_SAMPLES", 10_000)
        self.PACKING_TRIALS: int = _int_env("ENTROPY_PACKING_TRIALS", 2000)
        self.MAX_POINTSET: int = _int_env("ENTROPY_MAX_POINTSET", 4096)

        if self.MAX_CENTERS < 1:
            raise RuntimeError("ENTROPY_MAX_CENTERS must be positive.")
        if self.MAX_DIMENSION < 1 or self.MAX_INDEX < 1:
            raise RuntimeError("ENTROPY_MAX_DIMENSION and ENTROPY_MAX_INDEX must be positive.")


@lru_cache()
def get_settings() -> Settings:
    return Settings()
