from .artifacts import RunArtifactWriter, default_run_dir
from .config import Command, ExperimentConfig, build_config, load_config
from .runner import RunOutcome, run

__all__ = [
    "Command",
    "ExperimentConfig",
    "RunArtifactWriter",
    "RunOutcome",
    "build_config",
    "default_run_dir",
    "load_config",
    "run",
]
