"""
Configuration management for the spin network simulator.
"""
from typing import List

from decouple import config
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Application
    app_name: str = "Spin Network Simulator"
    app_version: str = "1.0.0"
    debug: bool = config("DEBUG", default=False, cast=bool)

    # Server
    host: str = config("HOST", default="127.0.0.1")
    port: int = config("PORT", default=8000, cast=int)

    # Logging
    log_level: str = config("LOG_LEVEL", default="INFO")
    log_format: str = config("LOG_FORMAT", default="json")

    # Physics
    coupling: float = config("COUPLING_J", default=1.0, cast=float)

    # Numerics
    eig_solver: str = config("EIG_SOLVER", default="jacobi")
    jacobi_tolerance: float = config("JACOBI_TOLERANCE", default=1e-13, cast=float)
    jacobi_max_sweeps: int = config("JACOBI_MAX_SWEEPS", default=100, cast=int)
    hermitian_tolerance: float = config("HERMITIAN_TOLERANCE", default=1e-12, cast=float)
    unitary_tolerance: float = config("UNITARY_TOLERANCE", default=1e-12, cast=float)
    norm_tolerance: float = config("NORM_TOLERANCE", default=1e-10, cast=float)
    density_tolerance: float = config("DENSITY_TOLERANCE", default=1e-10, cast=float)
    eigenvalue_clamp: float = config("EIGENVALUE_CLAMP", default=1e-12, cast=float)

    # Monte Carlo
    default_realizations: int = config("DEFAULT_REALIZATIONS", default=1000, cast=int)
    default_seed: int = config("DEFAULT_SEED", default=42, cast=int)
    default_workers: int = config("DEFAULT_WORKERS", default=1, cast=int)

    # Output
    trace_samples_per_tm: int = config("TRACE_SAMPLES_PER_TM", default=100, cast=int)
    theta_step_degrees: float = config("THETA_STEP_DEGREES", default=5.0, cast=float)

    # API
    api_v1_prefix: str = "/api/v1"
    api_max_realizations: int = config("API_MAX_REALIZATIONS", default=2000, cast=int)
    api_max_workers: int = config("API_MAX_WORKERS", default=4, cast=int)
    cors_origins: List[str] = ["*"]

    @field_validator("eig_solver")
    @classmethod
    def check_eig_solver(cls, v: str) -> str:
        if v not in ("jacobi", "lapack"):
            raise ValueError("eig_solver must be 'jacobi' or 'lapack'")
        return v

    @field_validator("log_format")
    @classmethod
    def check_log_format(cls, v: str) -> str:
        if v not in ("json", "console"):
            raise ValueError("log_format must be 'json' or 'console'")
        return v

    @field_validator(
        "jacobi_tolerance",
        "hermitian_tolerance",
        "unitary_tolerance",
        "norm_tolerance",
        "density_tolerance",
        "eigenvalue_clamp",
    )
    @classmethod
    def check_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("tolerances must be positive")
        return v

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=False, extra="ignore")


# Global settings instance
settings = Settings()
