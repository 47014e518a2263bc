from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Callable

import click

from pc_tsp.cli.context import CLIContext
from pc_tsp.config.settings import MetricMode
from pc_tsp.errors import ConfigError, PcTspError
from pc_tsp.experiments.config import (
    Command,
    GeneratorKind,
    build_config,
    load_config,
)
from pc_tsp.experiments.runner import run
from pc_tsp.sampling.experiment import parse_range


def parse_float_list(text: str | None) -> list[float]:
    """``"0,5,10"`` -> [0.0, 5.0, 10.0]; ``"0:30:5"`` -> [0.0, 5.0, ..., 30.0]."""
    if text is None or not text.strip():
        return []
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0:
                raise ValueError(text)
            start, stop, step = parts
            count = int(round((stop - start) / step)) + 1
            return [start + i * step for i in range(max(count, 0))]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid number list {text!r}") from exc


def parse_int_grid(text: str | None) -> list[int]:
    if text is None or not text.strip():
        return []
    return parse_range(text)


def mesh_source_options(func: Callable) -> Callable:
    """--input / --generate plus the generator parameters."""
    options = [
        click.option(
            "--input",
            "input_path",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="PLY or OBJ triangle mesh.",
        ),
        click.option(
            "--generate",
            "generator",
            type=click.Choice([k.value for k in GeneratorKind]),
            default=None,
            help="Synthetic mesh instead of --input.",
        ),
        click.option("--major-radius", type=float, default=None, help="Torus R."),
        click.option("--minor-radius", type=float, default=None, help="Torus r."),
        click.option("--u-steps", type=int, default=None, help="Torus grid steps around the axis."),
        click.option("--v-steps", type=int, default=None, help="Torus grid steps around the tube."),
        click.option(
            "--alternate-diagonals", is_flag=True, default=False, help="Alternate quad splits."
        ),
        click.option("--subdivisions", type=int, default=2, show_default=True, help="Icosphere level."),
        click.option(
            "--radii", type=str, default="1,1,1", show_default=True, help="Spheroid semi-axes."
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def run_options(func: Callable) -> Callable:
    options = [
        click.option(
            "--metric-mode",
            type=click.Choice([m.value for m in MetricMode]),
            default=None,
            help="Mass-matrix handling (default from settings).",
        ),
        click.option("--seed", type=int, default=None, help="Random seed (default from settings)."),
        click.option(
            "--out-dir",
            type=click.Path(file_okay=False, path_type=Path),
            default=None,
            help="Output folder (default: <runs-dir>/<command>/<timestamp>__<uuid>/).",
        ),
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Replay an ExperimentConfig JSON or a run manifest; other options are ignored.",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def source_values(ctx: CLIContext, params: dict[str, Any]) -> dict[str, Any]:
    """ExperimentConfig fields for the mesh source and the common run options."""
    settings = ctx.settings
    values: dict[str, Any] = {
        "metric_mode": params.get("metric_mode") or settings.metric_mode,
        "seed": params["seed"] if params.get("seed") is not None else settings.default_seed,
        "output_dir": params.get("out_dir"),
    }
    if params.get("input_path") is not None:
        values["input_path"] = params["input_path"]
    generator = params.get("generator")
    if generator is None and params.get("input_path") is None:
        generator = "torus"
    if generator is not None:
        values["generator"] = {
            "kind": generator,
            "major_radius": params.get("major_radius") or settings.torus_major_radius,
            "minor_radius": params.get("minor_radius") or settings.torus_minor_radius,
            "u_steps": params.get("u_steps") or settings.torus_u_steps,
            "v_steps": params.get("v_steps") or settings.torus_v_steps,
            "alternate_diagonals": params.get("alternate_diagonals", False),
            "n_subdiv": params.get("subdivisions", 2),
            "radii": parse_float_list(params.get("radii") or "1,1,1"),
        }
    return values


def execute(
    ctx: CLIContext,
    command: Command,
    params: dict[str, Any],
    command_values: Callable[[], dict[str, Any]] = dict,
) -> None:
    """Validate the configuration, run it, print the outcome and exit with its code."""
    try:
        if params.get("config_path") is not None:
            config = load_config(params["config_path"])
            if config.command is not command:
                raise ConfigError(
                    f"config is for {config.command.value!r}, not {command.value!r}"
                )
            if params.get("out_dir") is not None:
                config = config.model_copy(update={"output_dir": params["out_dir"]})
        else:
            config = build_config(
                command=command, **source_values(ctx, params), **command_values()
            )
    except PcTspError as exc:
        click.echo(f"Error: {exc.message}", err=True)
        click.get_current_context().exit(exc.exit_code)
        return

    outcome = run(config, ctx.settings)
    if outcome.error is not None:
        click.echo(f"Error ({outcome.error.code}): {outcome.error.message}", err=True)
    click.echo(
        json.dumps(
            {
                "command": command.value,
                "exit_code": outcome.exit_code,
                "run_dir": str(outcome.run_dir),
                "config_hash": config.config_hash,
                "artifacts": outcome.artifacts,
                "results": outcome.summary,
            },
            indent=2,
            ensure_ascii=False,
        )
    )
    failed = outcome.summary.get("failed_check")
    if failed:
        detail = outcome.summary.get("failed_detail") or ""
        click.echo(f"Invariant violated: {failed} {detail}".rstrip(), err=True)
    if outcome.exit_code:
        click.get_current_context().exit(outcome.exit_code)
