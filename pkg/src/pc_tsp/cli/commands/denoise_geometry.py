from __future__ import annotations

import click

from pc_tsp.cli.context import CLIContext
from pc_tsp.cli.shared import execute, mesh_source_options, parse_float_list, run_options
from pc_tsp.denoise.solver import DataTerm
from pc_tsp.experiments.config import Command


def register(cli: click.Group) -> None:
    @cli.command("denoise-geometry")
    @mesh_source_options
    @run_options
    @click.option(
        "--snr", "snr_db", type=str, default="0:30:5", show_default=True, help="SNR grid in dB."
    )
    @click.option("--lambda", "lambdas", type=str, default="0.1,0.2,0.5", show_default=True)
    @click.option("--gamma", "gammas", type=str, default="0.1", show_default=True)
    @click.option("--trials", type=int, default=None, help="Noise draws per cell (default from settings).")
    @click.option(
        "--data-term",
        type=click.Choice([d.value for d in DataTerm]),
        default=DataTerm.squared.value,
        show_default=True,
        help="squared: ||s-x||^2 (proximal gradient); unsquared: ||s-x|| (ADMM).",
    )
    @click.option("--write-mesh", is_flag=True, default=False, help="Write noisy/denoised normals as PLY.")
    @click.pass_obj
    def denoise_geometry_cmd(
        ctx: CLIContext,
        snr_db: str,
        lambdas: str,
        gammas: str,
        trials: int | None,
        data_term: str,
        write_mesh: bool,
        **params,
    ) -> None:
        """Denoise noisy triangle normals over L2 across an SNR grid; writes denoise.csv and summary.csv."""
        execute(
            ctx,
            Command.denoise_geometry,
            params,
            lambda: {
                "snr_db": parse_float_list(snr_db),
                "lambdas": parse_float_list(lambdas),
                "gammas": parse_float_list(gammas),
                "trials": trials if trials is not None else ctx.settings.default_trials,
                "data_term": data_term,
                "write_mesh": write_mesh,
            },
        )
