"""
Application Configuration
"""
from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables (prefix TILETREE_)"""

    # App
    app_name: str = "tiletree"
    app_version: str = "0.1.0"
    log_level: str = "INFO"

    # Execution
    jobs: Optional[int] = None  # TILETREE_JOBS overrides --jobs when set
    output_dir: str = "runs"

    # Numerics
    zero_tolerance: float = 1e-12  # residual ℰ and ℳ at or below count as exhausted
    oracle_tolerance: float = 1e-8
    packet_decay_tolerance: float = 1e-8
    level_guard: int = 64

    # Baselines
    baseline_slack: float = 0.20
    baseline_slack_wide: float = 0.25

    class Config:
        env_file = ".env"
        env_prefix = "TILETREE_"
        case_sensitive = False


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
