# app/core/config.py - Configuration for the MCN FDI analyzer
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings using Pydantic BaseSettings."""

    model_config = SettingsConfigDict(env_file=".env", env_prefix="MCN_FDI_", case_sensitive=True)

    # Application
    APP_TITLE: str = "MCN FDI Analyzer"
    APP_VERSION: str = "1.0.0"

    # Environment (local, test, production)
    ENVIRONMENT: Literal["local", "test", "production"] = "local"

    # Logging (always written to stderr, stdout carries reports only)
    LOG_LEVEL: str = "WARNING"

    # Structure
    NONZERO_TOL: float = Field(default=1e-12, ge=0.0)  # relative, below counts as structural zero

    # Scenario enumeration
    SCENARIO_CAP: int = Field(default=10**6, ge=1)
    WORKERS: int = Field(default=1, ge=1)  # 1 = sequential

    # Numeric rank oracle
    ORACLE_TRIALS: int = Field(default=5, ge=1)
    ORACLE_TOL: float = Field(default=1e-8, gt=0.0)
    ORACLE_RETRY_CAP: int = Field(default=20, ge=1)
    ORACLE_WEIGHT_LOW: float = 0.5
    ORACLE_WEIGHT_HIGH: float = 2.0
    ORACLE_Z_LOW: float = 1.5
    ORACLE_Z_HIGH: float = 3.0
    ORACLE_MAX_CONDITION: float = 1e12

    # Simulation
    DEFAULT_SIGNAL_PERIOD: int = Field(default=8, ge=2)  # frames per sinusoid period

    @field_validator("LOG_LEVEL", mode="after")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """Accept lower-case level names from the environment."""
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"invalid log level: {v}")
        return level


settings = Settings()
