from __future__ import annotations

import click

from pc_tsp.cli.context import CLIContext
from pc_tsp.cli.shared import execute, mesh_source_options, parse_int_grid, run_options
from pc_tsp.experiments.config import Command, SamplingStrategy
from pc_tsp.operators.laplacians import LaplacianVariant


def register(cli: click.Group) -> None:
    @cli.command("recover-color")
    @mesh_source_options
    @run_options
    @click.option(
        "--n-samples",
        type=str,
        default="100:750:50",
        show_default=True,
        help="Sample-count grid: start:stop:step or a comma list.",
    )
    @click.option(
        "--bandwidth",
        type=int,
        default=None,
        help="|K| for every grid point (default: floor(N_sc/2) capped by settings).",
    )
    @click.option(
        "--variant",
        "variants",
        type=click.Choice([v.value for v in LaplacianVariant]),
        multiple=True,
        default=(LaplacianVariant.full_L1.value, LaplacianVariant.down_only.value),
        show_default=True,
        help="Laplacian whose eigenvectors span the bandlimited model (repeatable).",
    )
    @click.option(
        "--sampling",
        type=click.Choice([s.value for s in SamplingStrategy]),
        default=SamplingStrategy.maxdet.value,
        show_default=True,
    )
    @click.option("--write-mesh", is_flag=True, default=False, help="Also write recovered colours as PLY.")
    @click.pass_obj
    def recover_color_cmd(
        ctx: CLIContext,
        n_samples: str,
        bandwidth: int | None,
        variants: tuple[str, ...],
        sampling: str,
        write_mesh: bool,
        **params,
    ) -> None:
        """Sample the colour edge signal, recover it (MaxDet or random) and write recovery.csv."""
        execute(
            ctx,
            Command.recover_color,
            params,
            lambda: {
                "n_samples": parse_int_grid(n_samples),
                "bandwidth": bandwidth,
                "bandwidth_cap": ctx.settings.bandwidth_cap,
                "variants": list(variants),
                "sampling": sampling,
                "write_mesh": write_mesh,
            },
        )
