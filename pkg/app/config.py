"""
Configuration settings for the connected subgraph solver suite.
"""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # Database settings
    database_url: str = Field(
        default="sqlite:///./mccs_runs.db",
        description="Database URL for recorded solver runs"
    )

    # Application settings
    app_name: str = Field(default="MCCS Solver API", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")
    debug: bool = Field(default=False, description="Debug mode")
    log_level: str = Field(default="INFO", description="Logging level")

    # Solver defaults
    probability_eps: float = Field(default=1e-6, gt=0.0, lt=0.5, description="Probability clamp bound")
    default_rel_gap: float = Field(default=1e-4, ge=0.0, description="Relative optimality gap")
    default_k: int = Field(default=4, ge=1, description="Layer count for k-strategies")
    default_time_limit: Optional[float] = Field(default=None, gt=0.0, description="Solver time limit in seconds")
    leaf_cuts_default: bool = Field(default=True, description="Install single-node leaf cuts")
    connectivity_propagation: bool = Field(default=True, description="Reachability fixing in the exact solver")

    # Benchmark settings
    bench_workers: int = Field(default=1, ge=1, description="Worker processes for bench runs")

    class Config:
        env_file = ".env"
        case_sensitive = False


# Global settings instance
settings = Settings()
