from __future__ import annotations

import click

from pc_tsp.cli.context import CLIContext
from pc_tsp.cli.shared import execute, mesh_source_options, run_options
from pc_tsp.experiments.config import Command, MeshFormat


def register(cli: click.Group) -> None:
    @cli.command("generate")
    @mesh_source_options
    @run_options
    @click.option(
        "--format",
        "output_format",
        type=click.Choice([f.value for f in MeshFormat]),
        default=MeshFormat.ply.value,
        show_default=True,
    )
    @click.pass_obj
    def generate_cmd(ctx: CLIContext, output_format: str, **params) -> None:
        """Write a synthetic torus or spheroid with coordinate colours and face normals."""
        execute(ctx, Command.generate, params, lambda: {"output_format": output_format})
