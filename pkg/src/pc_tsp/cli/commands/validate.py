from __future__ import annotations

from pathlib import Path

import click

from pc_tsp.cli.context import CLIContext
from pc_tsp.cli.shared import execute
from pc_tsp.experiments.config import Command


def register(cli: click.Group) -> None:
    @cli.command("validate")
    @click.argument("mesh", type=click.Path(dir_okay=False, path_type=Path))
    @click.option(
        "--out-dir",
        type=click.Path(file_okay=False, path_type=Path),
        default=None,
        help="Output folder for report.json.",
    )
    @click.pass_obj
    def validate_cmd(ctx: CLIContext, mesh: Path, out_dir: Path | None) -> None:
        """Check a PLY/OBJ mesh; exits 0 when every invariant holds, 4 naming the first violation."""
        execute(ctx, Command.validate, {"input_path": mesh, "out_dir": out_dir, "seed": None})
