"""Experiment configuration model shared by the CLI and the runner."""

from __future__ import annotations

import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Any, List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from pc_tsp.config.settings import MetricMode
from pc_tsp.denoise.solver import DataTerm
from pc_tsp.errors import ConfigError, ConfigFileError
from pc_tsp.operators.laplacians import LaplacianVariant
from pc_tsp.synthesis.spheroid import MAX_SUBDIVISIONS


class Command(str, Enum):
    generate = "generate"
    recover_color = "recover-color"
    denoise_geometry = "denoise-geometry"
    spectrum = "spectrum"
    validate = "validate"


class GeneratorKind(str, Enum):
    torus = "torus"
    spheroid = "spheroid"


class SamplingStrategy(str, Enum):
    maxdet = "maxdet"
    random = "random"


class MeshFormat(str, Enum):
    ply = "ply"
    obj = "obj"


class GeneratorSpec(BaseModel):
    """Synthetic mesh source; torus fields default to the 30x20 grid with R=2, r=0.7."""

    kind: GeneratorKind = GeneratorKind.torus
    major_radius: float = Field(default=2.0, gt=0)
    minor_radius: float = Field(default=0.7, gt=0)
    u_steps: int = Field(default=30, ge=3)
    v_steps: int = Field(default=20, ge=3)
    alternate_diagonals: bool = False
    n_subdiv: int = Field(default=2, ge=0, le=MAX_SUBDIVISIONS)
    radii: List[float] = Field(default_factory=lambda: [1.0, 1.0, 1.0])

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _check_shape(self) -> "GeneratorSpec":
        if self.kind is GeneratorKind.torus and self.major_radius <= self.minor_radius:
            raise ValueError("torus needs major_radius > minor_radius")
        if len(self.radii) != 3 or any(r <= 0 for r in self.radii):
            raise ValueError("radii must be three positive numbers")
        return self


class ExperimentConfig(BaseModel):
    command: Command
    input_path: Optional[Path] = Field(default=None, description="PLY or OBJ mesh")
    generator: Optional[GeneratorSpec] = Field(default=None, description="Synthetic mesh source")
    metric_mode: MetricMode = MetricMode.lumped
    seed: Optional[int] = 0

    # recover-color
    n_samples: List[int] = Field(default_factory=list, description="N_sc grid")
    bandwidth: Optional[int] = Field(
        default=None, ge=1, description="|K|; default floor(N_sc/2) capped at bandwidth_cap"
    )
    bandwidth_cap: int = Field(default=400, ge=1)
    variants: List[LaplacianVariant] = Field(
        default_factory=lambda: [LaplacianVariant.full_L1, LaplacianVariant.down_only]
    )
    sampling: SamplingStrategy = SamplingStrategy.maxdet

    # denoise-geometry
    snr_db: List[float] = Field(default_factory=list)
    lambdas: List[float] = Field(default_factory=list)
    gammas: List[float] = Field(default_factory=list)
    trials: int = Field(default=20, ge=1)
    data_term: DataTerm = DataTerm.squared

    # spectrum
    laplacian_variant: LaplacianVariant = LaplacianVariant.full_L1
    spectrum_k: Optional[int] = Field(default=None, ge=1, description="Eigenpairs; None = all")
    export_matrices: bool = False

    # outputs
    output_format: MeshFormat = MeshFormat.ply
    write_mesh: bool = False
    output_dir: Optional[Path] = None

    model_config = {"extra": "forbid"}

    @field_validator("lambdas", "gammas")
    @classmethod
    def _non_negative(cls, values: List[float]) -> List[float]:
        if any(v < 0 for v in values):
            raise ValueError("weights must be >= 0")
        return values

    @field_validator("n_samples")
    @classmethod
    def _positive(cls, values: List[int]) -> List[int]:
        if any(v < 1 for v in values):
            raise ValueError("sample counts must be >= 1")
        return values

    @model_validator(mode="after")
    def _check_command(self) -> "ExperimentConfig":
        sources = (self.input_path is not None) + (self.generator is not None)
        if sources != 1:
            raise ValueError("exactly one input source is required (input_path or generator)")
        if self.command is Command.generate and self.generator is None:
            raise ValueError("generate needs a generator spec")
        if self.command is Command.recover_color:
            if not self.n_samples:
                raise ValueError("recover-color needs a non-empty n_samples grid")
            if not self.variants:
                raise ValueError("recover-color needs at least one Laplacian variant")
        if self.command is Command.denoise_geometry:
            for name in ("snr_db", "lambdas", "gammas"):
                if not getattr(self, name):
                    raise ValueError(f"denoise-geometry needs a non-empty {name} grid")
        stochastic = self.command is Command.denoise_geometry or (
            self.command is Command.recover_color and self.sampling is SamplingStrategy.random
        )
        if stochastic and self.seed is None:
            raise ValueError(f"{self.command.value} needs a seed")
        return self

    def hash_payload(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude={"output_dir"})

    @property
    def config_hash(self) -> str:
        """Stable digest of everything that determines the results (not the output location)."""
        encoded = json.dumps(self.hash_payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(encoded.encode("utf-8")).hexdigest()[:16]


def build_config(**values: Any) -> ExperimentConfig:
    """Validate keyword arguments into an ExperimentConfig, raising ConfigError on failure."""
    try:
        return ExperimentConfig(**values)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(f"invalid experiment configuration: {problems}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigFileError(f"cannot read experiment configuration {path}: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"experiment configuration {path} is not valid JSON: {exc}") from exc
    if isinstance(payload, dict) and "config" in payload and "config_hash" in payload:
        # a run manifest: replay its config
        payload = payload["config"]
    return build_config(**payload)
