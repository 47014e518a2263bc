from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from pc_tsp.experiments import runner
from pc_tsp.experiments.config import Command
from pc_tsp.mesh_io import read_mesh
from tests.integration.helpers import SMALL_TORUS, load_manifest, read_csv, run_cli


def _assert_csv_hash(path: Path, config_hash: str) -> list[dict[str, str]]:
    rows = read_csv(path)
    assert rows
    assert {row["config_hash"] for row in rows} == {config_hash}
    return rows


def test_generate_writes_a_valid_coloured_mesh(generated_mesh: Path) -> None:
    points, triangles = read_mesh(generated_mesh)
    manifest = load_manifest(generated_mesh.parent)

    assert points.n_points == 48
    assert triangles.shape == (96, 3)
    assert points.attributes is not None and points.attributes.shape == (48, 3)
    assert manifest["exit_code"] == 0
    assert manifest["mesh"] == {"N": 48, "E": 144, "T": 96, "chi": 0}
    assert manifest["results"]["mesh_file"] == "mesh.ply"


def test_generate_obj(tmp_path: Path, runs_dir: Path) -> None:
    out_dir = tmp_path / "obj"
    run_cli(
        ["generate", "--generate", "spheroid", "--subdivisions", "1", "--format", "obj", "--out-dir", str(out_dir)],
        runs_dir,
    )
    points, triangles = read_mesh(out_dir / "mesh.obj")

    assert points.n_points == 42
    assert triangles.shape == (80, 3)


def test_default_run_dir_is_under_the_runs_dir(runs_dir: Path) -> None:
    run_cli(["generate", *SMALL_TORUS], runs_dir)
    run_dirs = list((runs_dir / "generate").iterdir())

    assert len(run_dirs) == 1
    assert (run_dirs[0] / "manifest.json").exists()


def test_validate_accepts_a_generated_mesh(tmp_path: Path, runs_dir: Path, generated_mesh: Path) -> None:
    out_dir = tmp_path / "validate"
    run_cli(["validate", str(generated_mesh), "--out-dir", str(out_dir)], runs_dir)
    report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))

    assert report["ok"] is True
    assert [c["name"] for c in report["checks"]][0] == "construction"


def test_validate_reports_flipped_winding(tmp_path: Path, runs_dir: Path) -> None:
    mesh = tmp_path / "flipped.obj"
    mesh.write_text("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 1 4 3\n", encoding="utf-8")
    out_dir = tmp_path / "validate"
    result = run_cli(["validate", str(mesh), "--out-dir", str(out_dir)], runs_dir, expect=4)

    assert "Invariant violated: consistent_winding" in result.output
    report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
    assert report["ok"] is False
    assert load_manifest(out_dir)["status"] == "failed"


def test_validate_reports_construction_failures(tmp_path: Path, runs_dir: Path) -> None:
    mesh = tmp_path / "duplicate.obj"
    mesh.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nf 2 3 1\n", encoding="utf-8")
    result = run_cli(
        ["validate", str(mesh), "--out-dir", str(tmp_path / "validate")], runs_dir, expect=4
    )

    assert "Invariant violated: construction" in result.output


def test_spectrum_with_matrix_export(tmp_path: Path, runs_dir: Path) -> None:
    out_dir = tmp_path / "spectrum"
    run_cli(
        ["spectrum", *SMALL_TORUS, "--k", "6", "--export-matrices", "--out-dir", str(out_dir)],
        runs_dir,
    )
    manifest = load_manifest(out_dir)
    eigenvalues = _assert_csv_hash(out_dir / "eigenvalues.csv", manifest["config_hash"])
    energy = _assert_csv_hash(out_dir / "sft_energy.csv", manifest["config_hash"])

    values = [float(row["eigenvalue"]) for row in eigenvalues]
    assert len(values) == 6
    assert values == sorted(values)
    # two harmonic 1-forms on the torus
    assert manifest["results"]["near_zero_eigenvalues"] == 2
    assert len(energy) == 6
    cumulative = [float(row["cumulative_energy"]) for row in energy]
    assert all(0.0 <= c <= 1.0 + 1e-12 for c in cumulative)
    assert sorted(p.name for p in (out_dir / "matrices").iterdir()) == sorted(
        f"{name}.mtx" for name in ("B1", "B2", "M0", "M1", "M2", "L1", "L1_down", "L1_up", "L2")
    )


def test_recover_color(tmp_path: Path, runs_dir: Path) -> None:
    out_dir = tmp_path / "recover"
    run_cli(
        [
            "recover-color",
            *SMALL_TORUS,
            "--n-samples",
            "40,80",
            "--variant",
            "full_L1",
            "--write-mesh",
            "--out-dir",
            str(out_dir),
        ],
        runs_dir,
    )
    manifest = load_manifest(out_dir)
    rows = _assert_csv_hash(out_dir / "recovery.csv", manifest["config_hash"])

    assert [(row["n_samples"], row["variant"]) for row in rows] == [
        ("40", "full_L1"),
        ("80", "full_L1"),
    ]
    assert all(np.isfinite(float(row["mse_mean_sq"])) for row in rows)
    assert (out_dir / "recovered_full_L1_80.ply").exists()
    assert manifest["config"]["n_samples"] == [40, 80]


def test_denoise_geometry(tmp_path: Path, runs_dir: Path) -> None:
    out_dir = tmp_path / "denoise"
    run_cli(
        [
            "denoise-geometry",
            *SMALL_TORUS,
            "--snr",
            "10",
            "--lambda",
            "0.1",
            "--gamma",
            "0",
            "--trials",
            "2",
            "--write-mesh",
            "--out-dir",
            str(out_dir),
        ],
        runs_dir,
    )
    manifest = load_manifest(out_dir)
    rows = _assert_csv_hash(out_dir / "denoise.csv", manifest["config_hash"])
    summary = _assert_csv_hash(out_dir / "summary.csv", manifest["config_hash"])

    assert [row["trial"] for row in rows] == ["0", "1"]
    assert len(summary) == 1 and summary[0]["trials"] == "2"
    assert (out_dir / "noisy_normals_snr10.ply").exists()
    assert (out_dir / "denoised_normals_snr10.ply").exists()


def test_config_replay_reproduces_the_run(tmp_path: Path, runs_dir: Path) -> None:
    first, second = tmp_path / "first", tmp_path / "second"
    run_cli(["spectrum", *SMALL_TORUS, "--k", "4", "--out-dir", str(first)], runs_dir)
    run_cli(
        ["spectrum", "--config", str(first / "manifest.json"), "--out-dir", str(second)], runs_dir
    )

    assert load_manifest(first)["config_hash"] == load_manifest(second)["config_hash"]
    assert read_csv(first / "eigenvalues.csv") == read_csv(second / "eigenvalues.csv")


def test_replaying_a_config_for_another_command_fails(tmp_path: Path, runs_dir: Path) -> None:
    first = tmp_path / "first"
    run_cli(["spectrum", *SMALL_TORUS, "--k", "4", "--out-dir", str(first)], runs_dir)
    result = run_cli(
        ["generate", "--config", str(first / "manifest.json")], runs_dir, expect=2
    )

    assert "not 'generate'" in result.output


def test_bad_grid_exits_with_a_config_error(tmp_path: Path, runs_dir: Path) -> None:
    result = run_cli(
        ["denoise-geometry", *SMALL_TORUS, "--lambda=-0.5", "--out-dir", str(tmp_path / "bad")],
        runs_dir,
        expect=2,
    )

    assert "Error:" in result.output
    assert not (tmp_path / "bad").exists()


def test_malformed_mesh_exits_with_an_io_error(tmp_path: Path, runs_dir: Path) -> None:
    mesh = tmp_path / "broken.ply"
    mesh.write_text("ply\nformat ascii 1.0\nelement vertex 3\n", encoding="ascii")
    out_dir = tmp_path / "broken"
    run_cli(["spectrum", "--input", str(mesh), "--out-dir", str(out_dir)], runs_dir, expect=3)

    error = json.loads((out_dir / "errors" / "error.json").read_text(encoding="utf-8"))
    assert error["stage"] == "load"
    assert error["exit_code"] == 3
    assert load_manifest(out_dir)["status"] == "failed"


def test_missing_input_mesh_exits_with_an_io_error(tmp_path: Path, runs_dir: Path) -> None:
    out_dir = tmp_path / "missing"
    result = run_cli(
        ["spectrum", "--input", str(tmp_path / "absent.ply"), "--out-dir", str(out_dir)],
        runs_dir,
        expect=3,
    )

    assert "MESH_IO" in result.output
    error = json.loads((out_dir / "errors" / "error.json").read_text(encoding="utf-8"))
    assert error["code"] == "MESH_IO"
    assert error["exit_code"] == 3


def test_validate_of_a_missing_mesh_exits_with_an_io_error(tmp_path: Path, runs_dir: Path) -> None:
    run_cli(
        ["validate", str(tmp_path / "absent.obj"), "--out-dir", str(tmp_path / "validate")],
        runs_dir,
        expect=3,
    )


def test_missing_config_file_exits_with_an_io_error(tmp_path: Path, runs_dir: Path) -> None:
    result = run_cli(["spectrum", "--config", str(tmp_path / "absent.json")], runs_dir, expect=3)

    assert "cannot read experiment configuration" in result.output


def test_unexpected_failures_are_persisted_as_numerical_errors(
    tmp_path: Path, runs_dir: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    def broken(state) -> None:
        raise np.linalg.LinAlgError("Eigenvalues did not converge")

    monkeypatch.setitem(runner.COMMANDS, Command.spectrum, broken)
    out_dir = tmp_path / "broken"
    result = run_cli(["spectrum", *SMALL_TORUS, "--out-dir", str(out_dir)], runs_dir, expect=5)

    assert "UNEXPECTED_FAILURE" in result.output
    error = json.loads((out_dir / "errors" / "error.json").read_text(encoding="utf-8"))
    assert error["exit_code"] == 5
    assert error["cause_chain"][0]["exception_type"] == "LinAlgError"
    assert "LinAlgError" in (out_dir / "errors" / "traceback.txt").read_text(encoding="utf-8")
    assert load_manifest(out_dir)["status"] == "failed"


def test_env_info(runs_dir: Path) -> None:
    result = run_cli(["env-info"], runs_dir)

    assert "METRIC_MODE:" in result.output
    assert "numpy:" in result.output
