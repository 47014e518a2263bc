from __future__ import annotations

from enum import Enum
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


REPO_ROOT = Path(__file__).resolve().parents[3]


class MetricMode(str, Enum):
    """How the Whitney mass matrices enter the Hodge Laplacians."""

    lumped = "lumped"
    consistent_solve = "consistent-solve"
    identity = "identity"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=REPO_ROOT / ".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    metric_mode: MetricMode = Field(
        default=MetricMode.lumped,
        description="lumped: invert diagonal mass matrices; consistent-solve: sparse solves with "
        "the consistent Whitney matrices; identity: unweighted Laplacians.",
    )

    runs_dir: Path = Field(default_factory=lambda: REPO_ROOT / "runs")

    max_workers: int = Field(
        default=4,
        description="Thread pool size for experiment grids.",
    )

    # --- Spectral basis ---
    dense_eigen_threshold: int = Field(
        default=500,
        description="Operators of dimension below this use a dense eigendecomposition.",
    )
    eigen_max_iter: int = Field(
        default=10_000,
        description="Iteration budget of the shift-invert Lanczos solver.",
    )
    eigen_tol: float = Field(
        default=0.0,
        description="Lanczos convergence tolerance (0 selects machine precision).",
    )

    # --- Sampling / recovery ---
    recovery_cond_limit: float = Field(
        default=1e12,
        description="Largest accepted condition estimate of the recovery system.",
    )
    bandwidth_cap: int = Field(
        default=400,
        description="Cap of the default bandwidth |K| = floor(N_sc / 2).",
    )

    # --- Field maps ---
    lift_rank_tol: float = Field(
        default=1e-10,
        description="Relative eigenvalue threshold of the per-vertex lifting matrices.",
    )

    # --- Denoising ---
    denoise_tol: float = Field(
        default=1e-10,
        description="Relative objective change that stops the proximal solver.",
    )
    denoise_max_iter: int = Field(default=20_000)
    power_iteration_rtol: float = Field(default=1e-6)

    # --- Experiments ---
    default_seed: int = Field(default=0)
    default_trials: int = Field(
        default=20,
        description="Noise realizations averaged per denoising grid cell.",
    )

    torus_major_radius: float = Field(default=2.0)
    torus_minor_radius: float = Field(default=0.7)
    torus_u_steps: int = Field(default=30)
    torus_v_steps: int = Field(default=20)

    log_level: str = Field(
        default="INFO",
        validation_alias="LOG_LEVEL",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).",
    )

    @property
    def active_runs_dir(self) -> Path:
        return self.runs_dir
