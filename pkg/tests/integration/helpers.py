from __future__ import annotations

import csv
import json
import os
from pathlib import Path

from click.testing import CliRunner, Result

from pc_tsp.cli import cli

REPO_ROOT = Path(__file__).resolve().parents[2]

# 48 vertices, 144 edges, 96 triangles
SMALL_TORUS = ["--u-steps", "8", "--v-steps", "6"]


def run_cli(args: list[str], runs_dir: Path, *, expect: int | None = 0) -> Result:
    """Invoke the CLI from the repository root; ``expect=None`` skips the exit code check."""
    runner = CliRunner()
    cwd = os.getcwd()
    os.chdir(REPO_ROOT)
    try:
        result = runner.invoke(
            cli, ["--runs-dir", str(runs_dir), "--log-level", "WARNING", *args], catch_exceptions=False
        )
    finally:
        os.chdir(cwd)
    if expect is not None and result.exit_code != expect:
        raise AssertionError(
            f"Command {args} exited {result.exit_code}, expected {expect}\nOUTPUT:\n{result.output}"
        )
    return result


def load_manifest(run_dir: Path) -> dict:
    return json.loads((run_dir / "manifest.json").read_text(encoding="utf-8"))


def read_csv(path: Path) -> list[dict[str, str]]:
    with path.open(encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))
