"""Pydantic settings configuration for absentia."""

from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class SolverSettings(BaseSettings):
    """Eigensolver defaults."""

    model_config = SettingsConfigDict(env_prefix="ABSENTIA_SOLVER_")

    tol: float = Field(default=1e-8, description="Residual tolerance of eigen-solves")
    max_iter: int = Field(default=5000, description="Krylov iteration cap")
    seed: int = Field(default=42, description="Seed of the start vector")
    k: int = Field(default=6, description="Eigenpairs requested by spectrum runs")
    shift_retries: int = Field(default=3, description="Attempts when a shift is singular")
    dense_threshold: int = Field(
        default=200, description="Support size below which sup_rayleigh solves densely"
    )

    @field_validator("tol")
    @classmethod
    def validate_tol(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError("Solver tolerance must be in (0, 1)")
        return v

    @field_validator("max_iter", "k", "shift_retries", "dense_threshold")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Must be a positive integer")
        return v


class MeshSettings(BaseSettings):
    """Discretization tolerances."""

    model_config = SettingsConfigDict(env_prefix="ABSENTIA_MESH_")

    tol_mesh: float = Field(default=0.05, description="Relative slack of Hardy probes")
    tol_stab_rel: float = Field(
        default=1e-3, description="Stabilization tolerance, relative to 1 + |λ₁|"
    )

    @field_validator("tol_mesh", "tol_stab_rel")
    @classmethod
    def validate_fraction(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError("Tolerance must be between 0 and 1")
        return v


class CertifySettings(BaseSettings):
    """Certification policy."""

    model_config = SettingsConfigDict(env_prefix="ABSENTIA_CERTIFY_")

    strict_margin: float = Field(default=1e-9, description="Budget must be ≤ 1 - margin")
    drift_tolerance: float = Field(
        default=0.01, description="Relative constant drift allowed over the last sweep step"
    )
    max_workers: int = Field(default=1, description="Concurrent constant solves")

    @field_validator("strict_margin", "drift_tolerance")
    @classmethod
    def validate_small(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError("Must be between 0 and 1")
        return v


class Settings(BaseSettings):
    """Main application settings."""

    model_config = SettingsConfigDict(
        env_prefix="ABSENTIA_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
    )

    log_level: str = Field(default="INFO", description="Logging level")
    output_dir: str = Field(default="results", description="Default report directory")

    solver: SolverSettings = Field(default_factory=SolverSettings)
    mesh: MeshSettings = Field(default_factory=MeshSettings)
    certify: CertifySettings = Field(default_factory=CertifySettings)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
