"""Configuration management for GapLab."""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """GapLab settings.

    All settings can be configured via environment variables with the GAPLAB_ prefix.
    """

    model_config = SettingsConfigDict(
        env_prefix="GAPLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR)",
    )

    alphabet: str = Field(
        default="01",
        description="Input alphabet; the first symbol plays the role of 0 in 0^n",
    )

    max_length: int = Field(
        default=6,
        ge=0,
        le=12,
        description="Largest input length L of the exhaustive test domain",
    )

    graph_bound: int = Field(
        default=8,
        ge=1,
        le=8,
        description="Largest vertex count accepted by the reconstruction toolkit",
    )

    universe_bound: int = Field(
        default=14,
        ge=1,
        le=20,
        description="Largest query universe size m verified by brute force over oracles",
    )

    slice_budget: int = Field(
        default=1_000_000,
        ge=1,
        description="Maximum weight-slice evaluations in the prime-divisor check",
    )

    max_candidates: int = Field(
        default=100_000,
        ge=1,
        description="Maximum candidate sets examined by a stage search",
    )

    seed: int = Field(
        default=0,
        ge=0,
        description="Seed for randomized fixture generation",
    )

    report_dir: str = Field(
        default="reports",
        description="Directory receiving JSON reports",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate and normalize log level."""
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        normalized = v.upper()
        if normalized not in valid_levels:
            raise ValueError(f"Invalid log level: {v}. Must be one of {valid_levels}")
        return normalized

    @field_validator("alphabet")
    @classmethod
    def validate_alphabet(cls, v: str) -> str:
        """Require at least two distinct symbols."""
        if len(v) < 2 or len(set(v)) != len(v):
            raise ValueError("Alphabet must contain at least two distinct symbols")
        return v


def get_settings() -> Settings:
    """Get settings instance."""
    return Settings()
