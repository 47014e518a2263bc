from __future__ import annotations

import click

from pc_tsp.cli.context import CLIContext
from pc_tsp.cli.shared import execute, mesh_source_options, run_options
from pc_tsp.experiments.config import Command
from pc_tsp.operators.laplacians import LaplacianVariant


def register(cli: click.Group) -> None:
    @cli.command("spectrum")
    @mesh_source_options
    @run_options
    @click.option(
        "--variant",
        type=click.Choice([v.value for v in LaplacianVariant]),
        default=LaplacianVariant.full_L1.value,
        show_default=True,
    )
    @click.option("--k", "spectrum_k", type=int, default=None, help="Eigenpairs to compute (default: all).")
    @click.option(
        "--export-matrices", is_flag=True, default=False, help="Write B1, B2, M0-M2, L1, L2 as .mtx."
    )
    @click.pass_obj
    def spectrum_cmd(
        ctx: CLIContext, variant: str, spectrum_k: int | None, export_matrices: bool, **params
    ) -> None:
        """L1 eigenvalues and the SFT energy of the colour edge signal."""
        execute(
            ctx,
            Command.spectrum,
            params,
            lambda: {
                "laplacian_variant": variant,
                "spectrum_k": spectrum_k,
                "export_matrices": export_matrices,
            },
        )
