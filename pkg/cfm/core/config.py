"""
Core configuration for the cfm solver templates
Manages environment variables and solver defaults
"""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""

    # App Info
    APP_NAME: str = "cfm"
    APP_VERSION: str = "1.0.0"
    SCHEMA_VERSION: str = "cfm/1"

    # Logging
    LOG_LEVEL: str = "INFO"

    # Output
    OUTPUT_DIR: str = "runs"

    # Solver defaults
    DEFAULT_TOL: float = 1e-8
    DEFAULT_MAX_ITERS: int = 10000
    DEFAULT_ALPHA: float = 0.9
    DEFAULT_BETA: float = 0.5
    DEFAULT_GAMMA: float = 1e-6
    DIVERGENCE_FACTOR: float = 1e6

    # Operator norm estimation
    NORM_ITERS: int = 200
    NORM_TOL: float = 1e-8

    # Reproducibility
    SEED: int = 0

    model_config = SettingsConfigDict(env_file=".env", env_prefix="CFM_", case_sensitive=True, extra="ignore")


settings = Settings()
