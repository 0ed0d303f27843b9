# qbattery/core/config.py

import logging
import os
import sys
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from qbattery.core.errors import ConfigError


class Settings(BaseSettings):
    """Process-level settings, read from QBATTERY_* variables or a local .env"""

    model_config = SettingsConfigDict(
        env_prefix="QBATTERY_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    THREADS: int = 0
    LOG_LEVEL: str = "INFO"
    VOLTERRA_MAX_STEP: float = 0.005
    VERIFY_TOLERANCE: float = 1e-3
    BATH_MODES: int = 800
    BATH_HALF_WIDTH: float = 50.0
    CAVITY_TRANSIT: float = 40.0
    DISCRETE_OMEGA0_LIMIT: float = 100.0

    @field_validator("THREADS")
    @classmethod
    def check_threads(cls, value: int) -> int:
        if value < 0:
            raise ValueError("THREADS must be >= 0 (0 means auto)")
        cpus = os.cpu_count() or 1
        if value > cpus:
            logging.warning(
                f"QBATTERY_THREADS={value} exceeds the {cpus} available CPUs."
            )
        return value

    @field_validator("VOLTERRA_MAX_STEP", "VERIFY_TOLERANCE", "BATH_HALF_WIDTH")
    @classmethod
    def check_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("must be positive")
        return value

    def worker_count(self) -> int:
        """Concurrency cap for sweeps and figures (0 resolves to the CPU count)."""
        return self.THREADS or os.cpu_count() or 1


def configure_logging(level: Optional[str] = None):
    """Configure application logging"""
    name = (level or settings.LOG_LEVEL).upper()
    if name not in logging.getLevelNamesMapping():
        raise ConfigError(f"unknown log level {name!r}")

    logging.getLogger("asyncio").setLevel(logging.WARNING)

    logging.basicConfig(
        level=name,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


# Create global settings instance
settings = Settings()

TOOL_VERSION = "0.1.0"
