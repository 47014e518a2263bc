from __future__ import annotations

import sys

import click

from pc_tsp.cli.context import CLIContext, build_context

EXIT_CODES_HELP = """\b
Exit codes:
  0  success
  2  configuration error (bad options, grids, generator spec)
  3  I/O error (unreadable or malformed mesh file)
  4  mesh validation error (degenerate/duplicate triangle, bad index, invariant violated)
  5  numerical failure (eigensolver, singular recovery system, non-recoverable vertex)
"""


def _register_commands(cli_group: click.Group) -> None:
    from pc_tsp.cli.commands import (
        denoise_geometry,
        diagnostics,
        generate,
        recover_color,
        spectrum,
        validate,
    )

    for module in (
        diagnostics,
        generate,
        recover_color,
        denoise_geometry,
        spectrum,
        validate,
    ):
        module.register(cli_group)


def _configure_unicode_output() -> None:
    for stream in (sys.stdout, sys.stderr):
        try:
            stream.reconfigure(encoding="utf-8", errors="replace")
        except Exception:
            continue


@click.group(epilog=EXIT_CODES_HELP)
@click.option("--runs-dir", type=str, default=None, help="Override the runs directory for this session.")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    default=None,
    help="Override LOG_LEVEL for this session.",
)
@click.pass_context
def cli(ctx: click.Context, runs_dir: str | None, log_level: str | None) -> None:
    """pc-tsp: topological signal processing on triangulated point clouds."""
    _configure_unicode_output()
    ctx.obj = build_context(runs_dir, log_level)


_register_commands(cli)


def main() -> None:
    cli()


__all__ = ["CLIContext", "cli", "main"]
