"""End-to-end experiment runs: load or generate a mesh, run one command, persist artifacts.

Every run writes ``manifest.json`` (config, config hash, library version, mesh statistics) plus
the command's CSV/mesh outputs into its run directory. Library errors are persisted under
``errors/`` and mapped to the process exit code carried by the exception.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

import numpy as np

from pc_tsp import __version__
from pc_tsp.config.settings import MetricMode, Settings
from pc_tsp.core.complex import PointCloud, SimplicialComplex2, build_complex, triangle_geometry
from pc_tsp.core.validation import validate_mesh
from pc_tsp.denoise.experiment import SNR_COLUMNS, SUMMARY_COLUMNS, snr_experiment, summarize_snr
from pc_tsp.denoise.normals import add_normal_noise, denoise_normals
from pc_tsp.errors import EXIT_MESH, EXIT_OK, NumericalError, PcTspError
from pc_tsp.experiments.artifacts import RunArtifactWriter, WarningCollector, default_run_dir
from pc_tsp.experiments.config import Command, ExperimentConfig, GeneratorKind, GeneratorSpec
from pc_tsp.fields.maps import color_roundtrip, project_to_edges, reconstruct_vertex_field
from pc_tsp.mesh_io import export_matrices, read_mesh, write_mesh
from pc_tsp.metrics.whitney import MetricMatrices, assemble_metrics
from pc_tsp.operators.laplacians import build_l1, build_l2
from pc_tsp.operators.spectral import sft, spectral_basis
from pc_tsp.sampling.experiment import RECOVERY_COLUMNS, recovery_experiment
from pc_tsp.synthesis import TorusSpec, assign_coordinate_colors, make_spheroid, make_torus

logger = logging.getLogger("pc_tsp.experiments.runner")

SPECTRUM_COLUMNS = ["index", "eigenvalue"]
ENERGY_COLUMNS = ["index", "eigenvalue", "coefficient", "energy", "cumulative_energy"]


@dataclass
class RunOutcome:
    exit_code: int
    run_dir: Path
    artifacts: list[str] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    error: PcTspError | None = None


@dataclass
class _RunState:
    config: ExperimentConfig
    settings: Settings
    writer: RunArtifactWriter
    points: PointCloud | None = None
    triangles: np.ndarray | None = None
    complex_: SimplicialComplex2 | None = None
    summary: dict[str, Any] = field(default_factory=dict)
    stage: str = "load"


def generate_mesh(spec: GeneratorSpec) -> tuple[PointCloud, np.ndarray]:
    if spec.kind is GeneratorKind.torus:
        return make_torus(
            TorusSpec(
                major_radius=spec.major_radius,
                minor_radius=spec.minor_radius,
                u_steps=spec.u_steps,
                v_steps=spec.v_steps,
                alternate_diagonals=spec.alternate_diagonals,
            )
        )
    return make_spheroid(spec.n_subdiv, spec.radii)


def _load(state: _RunState) -> None:
    config = state.config
    if config.generator is not None:
        state.points, state.triangles = generate_mesh(config.generator)
    else:
        state.points, state.triangles = read_mesh(config.input_path)


def _build(state: _RunState) -> SimplicialComplex2:
    state.stage = "complex"
    state.complex_ = build_complex(state.points, state.triangles)
    logger.info("Mesh statistics: %s", state.complex_.stats())
    return state.complex_


def _metrics(state: _RunState) -> MetricMatrices:
    state.stage = "metrics"
    return assemble_metrics(state.complex_, state.config.metric_mode)


def _vertex_colors(state: _RunState) -> np.ndarray:
    if state.points.attributes is not None:
        return np.asarray(state.points.attributes)
    return assign_coordinate_colors(state.points)


def _to_source_order(complex_: SimplicialComplex2, per_triangle: np.ndarray) -> np.ndarray:
    out = np.empty_like(per_triangle)
    out[complex_.source_index] = per_triangle
    return out


def _run_generate(state: _RunState) -> None:
    complex_ = _build(state)
    state.stage = "write"
    colors = assign_coordinate_colors(state.points)
    suffix = state.config.output_format.value
    normals = _to_source_order(complex_, triangle_geometry(complex_).normals)
    path = write_mesh(
        state.writer.run_dir / f"mesh.{suffix}",
        state.points,
        complex_.source_triangles(),
        colors=colors,
        normals=normals,
    )
    state.writer.register(path)
    state.summary["mesh_file"] = path.name


def _run_recover_color(state: _RunState) -> None:
    config, settings = state.config, state.settings
    complex_ = _build(state)
    colors = _vertex_colors(state)
    metrics = _metrics(state)
    state.stage = "operators"
    laplacian = build_l1(complex_, metrics)

    state.stage = "fields"
    roundtrip = color_roundtrip(
        colors, complex_, pseudoinverse=True, rank_tol=settings.lift_rank_tol
    )
    state.summary["roundtrip_vertex_rms"] = float(
        np.sqrt(np.mean(np.sum((roundtrip - colors) ** 2, axis=1)))
    )

    state.stage = "recovery"
    records = recovery_experiment(
        complex_,
        colors,
        config.bandwidth,
        config.n_samples,
        laplacian,
        config.variants,
        sampling=config.sampling,
        seed=config.seed or 0,
        bandwidth_cap=config.bandwidth_cap,
        cond_limit=settings.recovery_cond_limit,
        dense_threshold=settings.dense_eigen_threshold,
        max_workers=settings.max_workers,
        keep_signals=config.write_mesh,
    )
    state.writer.write_csv(
        "recovery.csv",
        (r.as_row() for r in records),
        RECOVERY_COLUMNS,
        config_hash=config.config_hash,
    )
    state.summary["grid_points"] = len(records)

    if config.write_mesh:
        state.stage = "write"
        for variant in config.variants:
            best = max(
                (r for r in records if r.variant == variant.value), key=lambda r: r.n_samples
            )
            recovered = reconstruct_vertex_field(
                best.signal, complex_, pseudoinverse=True, rank_tol=settings.lift_rank_tol
            )
            path = write_mesh(
                state.writer.run_dir / f"recovered_{variant.value}_{best.n_samples}.ply",
                state.points,
                complex_.source_triangles(),
                colors=recovered,
            )
            state.writer.register(path)


def _run_denoise(state: _RunState) -> None:
    config, settings = state.config, state.settings
    complex_ = _build(state)
    metrics = _metrics(state)
    state.stage = "operators"
    laplacian = build_l2(complex_, metrics)
    clean = triangle_geometry(complex_).normals

    state.stage = "denoise"
    records = snr_experiment(
        complex_,
        config.snr_db,
        config.lambdas,
        config.gammas,
        config.trials,
        config.seed,
        laplacian,
        clean_normals=clean,
        tol=settings.denoise_tol,
        max_iter=settings.denoise_max_iter,
        data_term=config.data_term,
        power_rtol=settings.power_iteration_rtol,
        max_workers=settings.max_workers,
    )
    state.writer.write_csv(
        "denoise.csv", (r.as_row() for r in records), SNR_COLUMNS, config_hash=config.config_hash
    )
    summary = summarize_snr(records)
    state.writer.write_csv("summary.csv", summary, SUMMARY_COLUMNS, config_hash=config.config_hash)
    state.summary["grid_points"] = len(summary)
    state.summary["non_converged"] = sum(not r.converged for r in records)

    if config.write_mesh:
        state.stage = "write"
        snr_db = config.snr_db[0]
        lam, gamma = config.lambdas[0], config.gammas[0]
        noisy = add_normal_noise(clean, snr_db, np.random.default_rng([config.seed, 0, 0]))
        result = denoise_normals(
            complex_,
            noisy,
            lam,
            gamma,
            laplacian=laplacian,
            tol=settings.denoise_tol,
            max_iter=settings.denoise_max_iter,
            data_term=config.data_term,
            power_rtol=settings.power_iteration_rtol,
        )
        for name, normals in (("noisy", noisy), ("denoised", result.normals)):
            path = write_mesh(
                state.writer.run_dir / f"{name}_normals_snr{snr_db:g}.ply",
                state.points,
                complex_.source_triangles(),
                normals=_to_source_order(complex_, normals),
            )
            state.writer.register(path)


def _run_spectrum(state: _RunState) -> None:
    config, settings = state.config, state.settings
    complex_ = _build(state)
    metrics = _metrics(state)
    state.stage = "operators"
    l1 = build_l1(complex_, metrics)
    operator = l1.variant(config.laplacian_variant)

    state.stage = "spectrum"
    k = config.spectrum_k if config.spectrum_k is not None else "all"
    basis = spectral_basis(
        operator,
        k,
        dense_threshold=settings.dense_eigen_threshold,
        max_iter=settings.eigen_max_iter,
        tol=settings.eigen_tol,
    )
    state.writer.write_csv(
        "eigenvalues.csv",
        ({"index": i, "eigenvalue": float(v)} for i, v in enumerate(basis.eigenvalues)),
        SPECTRUM_COLUMNS,
        config_hash=config.config_hash,
    )

    signal = project_to_edges(_vertex_colors(state), complex_)
    coeffs = sft(basis, signal)
    energy = coeffs**2
    total = float(signal @ signal)
    cumulative = np.cumsum(energy) / total if total > 0 else np.zeros_like(energy)
    state.writer.write_csv(
        "sft_energy.csv",
        (
            {
                "index": i,
                "eigenvalue": float(basis.eigenvalues[i]),
                "coefficient": float(coeffs[i]),
                "energy": float(energy[i]),
                "cumulative_energy": float(cumulative[i]),
            }
            for i in range(basis.count)
        ),
        ENERGY_COLUMNS,
        config_hash=config.config_hash,
    )
    state.summary["eigenpairs"] = basis.count
    zero_tol = 1e-8 * max(1.0, float(basis.eigenvalues[-1]))
    state.summary["near_zero_eigenvalues"] = int(np.sum(basis.eigenvalues < zero_tol))

    if config.export_matrices:
        state.stage = "export"
        l2 = build_l2(complex_, metrics)
        for path in export_matrices(
            state.writer.run_dir / "matrices",
            {
                "B1": complex_.B1,
                "B2": complex_.B2,
                "M0": metrics.M0,
                "M1": metrics.M1,
                "M2": metrics.M2,
                "L1": l1.full,
                "L1_down": l1.down,
                "L1_up": l1.up,
                "L2": l2.L2,
            },
        ):
            state.writer.register(path)


def _run_validate(state: _RunState) -> None:
    state.stage = "validate"
    report, complex_ = validate_mesh(state.points, state.triangles)
    state.complex_ = complex_
    state.writer.write_json("report.json", report.to_dict())
    state.summary["report"] = report.to_dict()
    failure = report.first_failure
    if failure is not None:
        state.summary["failed_check"] = failure.name
        state.summary["failed_detail"] = failure.detail
        state.summary["exit_code"] = EXIT_MESH


COMMANDS: dict[Command, Callable[[_RunState], None]] = {
    Command.generate: _run_generate,
    Command.recover_color: _run_recover_color,
    Command.denoise_geometry: _run_denoise,
    Command.spectrum: _run_spectrum,
    Command.validate: _run_validate,
}


def _manifest(state: _RunState, exit_code: int, warnings: list[dict]) -> dict[str, Any]:
    config = state.config
    return {
        "command": config.command.value,
        "config": config.model_dump(mode="json"),
        "config_hash": config.config_hash,
        "version": __version__,
        "settings": {
            "metric_mode": MetricMode(config.metric_mode).value,
            "dense_eigen_threshold": state.settings.dense_eigen_threshold,
            "recovery_cond_limit": state.settings.recovery_cond_limit,
            "lift_rank_tol": state.settings.lift_rank_tol,
            "denoise_tol": state.settings.denoise_tol,
            "denoise_max_iter": state.settings.denoise_max_iter,
            "power_iteration_rtol": state.settings.power_iteration_rtol,
        },
        "mesh": state.complex_.stats() if state.complex_ is not None else None,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "exit_code": exit_code,
        "status": "ok" if exit_code == EXIT_OK else "failed",
        "warnings": len(warnings),
        "artifacts": state.writer.artifact_names(),
        "results": state.summary,
    }


def run(config: ExperimentConfig, settings: Settings | None = None) -> RunOutcome:
    """Run one experiment command and write its artifacts; failures become exit codes, not raises."""
    settings = settings or Settings()
    run_dir = (
        Path(config.output_dir)
        if config.output_dir
        else default_run_dir(settings.active_runs_dir, subdir=config.command.value)
    )
    run_dir.mkdir(parents=True, exist_ok=True)
    writer = RunArtifactWriter(run_dir)
    state = _RunState(config=config, settings=settings, writer=writer)
    logger.info("Run %s (config %s) -> %s", config.command.value, config.config_hash, run_dir)

    error: PcTspError | None = None
    with WarningCollector() as collector:
        try:
            _load(state)
            COMMANDS[config.command](state)
            exit_code = int(state.summary.pop("exit_code", EXIT_OK))
        except PcTspError as exc:
            error = exc
            exit_code = exc.exit_code
            logger.error("Stage %s failed: %s", state.stage, exc.message)
            writer.write_error(exc, state.stage, {"code": exc.code, "remediation_hint": exc.detail})
        except Exception as exc:
            error = NumericalError(
                f"unexpected {type(exc).__name__} in stage {state.stage}: {exc}",
                code="UNEXPECTED_FAILURE",
                detail="Not a known pc-tsp failure; see errors/traceback.txt.",
            ).with_traceback(exc.__traceback__)
            error.__cause__ = exc
            exit_code = error.exit_code
            logger.exception("Stage %s failed unexpectedly", state.stage)
            writer.write_error(
                error, state.stage, {"code": error.code, "remediation_hint": error.detail}
            )

    if collector.records:
        writer.write_warnings(collector.records)
    writer.write_manifest(_manifest(state, exit_code, collector.records))
    return RunOutcome(
        exit_code=exit_code,
        run_dir=run_dir,
        artifacts=writer.artifact_names(),
        summary=state.summary,
        error=error,
    )
