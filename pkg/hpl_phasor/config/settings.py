import os
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Any


class HplSettings(BaseSettings):
    """Runtime settings for the harmonic phasor toolkit."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="HPL_",
        extra="ignore"
    )

    # Parallelism
    threads: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        description="Upper bound on worker threads for per-harmonic design and bench sweeps"
    )

    # Logging
    log_level: str = Field(default="INFO", description="Logging level")

    # Timing
    timing_min_frames: int = Field(
        default=1000,
        description="Minimum number of frames averaged for the per-frame timing statistic"
    )

    @field_validator("threads", "timing_min_frames", mode="before")
    @classmethod
    def parse_positive_int(cls, v: Any) -> Any:
        if isinstance(v, str):
            v = int(v.strip())
        if isinstance(v, int) and v < 1:
            return 1
        return v

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_level(cls, v: Any) -> Any:
        if isinstance(v, str):
            return v.strip().upper()
        return v


# Singleton instance
settings = HplSettings()
