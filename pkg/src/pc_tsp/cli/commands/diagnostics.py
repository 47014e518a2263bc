from __future__ import annotations

import platform

import click
import numpy
import scipy

from pc_tsp import __version__
from pc_tsp.cli.context import CLIContext


def register(cli: click.Group) -> None:
    @cli.command("env-info")
    @click.pass_obj
    def env_info_cmd(ctx: CLIContext) -> None:
        """Print the effective settings and library versions."""
        settings = ctx.settings

        click.echo("--- Loaded from Settings ---")
        click.echo(f"METRIC_MODE:        {settings.metric_mode.value}")
        click.echo(f"RUNS_DIR:           {settings.active_runs_dir}")
        click.echo(f"LOG_LEVEL:          {settings.log_level}")
        click.echo(f"MAX_WORKERS:        {settings.max_workers}")
        click.echo(f"DENSE_EIGEN_THRESH: {settings.dense_eigen_threshold}")
        click.echo(f"COND_LIMIT:         {settings.recovery_cond_limit:g}")
        click.echo(f"DENOISE_TOL:        {settings.denoise_tol:g}")
        click.echo("--- Versions ---")
        click.echo(f"pc-tsp: {__version__} | numpy: {numpy.__version__} | scipy: {scipy.__version__}")
        click.echo(f"python: {platform.python_version()}")
