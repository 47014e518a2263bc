from __future__ import annotations

from pathlib import Path

import pytest

from tests.integration.helpers import SMALL_TORUS, run_cli


@pytest.fixture()
def runs_dir(tmp_path: Path) -> Path:
    return tmp_path / "runs"


@pytest.fixture()
def generated_mesh(tmp_path: Path, runs_dir: Path) -> Path:
    """A small coloured torus written by ``pc-tsp generate``."""
    out_dir = tmp_path / "generated"
    run_cli(["generate", *SMALL_TORUS, "--out-dir", str(out_dir)], runs_dir)
    return out_dir / "mesh.ply"
