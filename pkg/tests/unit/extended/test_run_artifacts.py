import json
import logging

from pc_tsp.errors import MeshIOError
from pc_tsp.experiments.artifacts import RunArtifactWriter, WarningCollector, default_run_dir


def test_run_artifact_writer_adds_the_config_hash_to_csv_rows(tmp_path):
    writer = RunArtifactWriter(tmp_path)
    rows = [{"n_samples": 10, "mse": 0.5, "extra": "dropped"}, {"n_samples": 20, "mse": 0.25}]

    path = writer.write_csv("recovery.csv", rows, ["n_samples", "mse"], config_hash="abc123")

    assert path.read_text(encoding="utf-8").splitlines() == [
        "n_samples,mse,config_hash",
        "10,0.5,abc123",
        "20,0.25,abc123",
    ]
    assert writer.artifact_names() == ["recovery.csv"]


def test_run_artifact_writer_appends_warnings(tmp_path):
    writer = RunArtifactWriter(tmp_path)
    writer.write_warnings([{"message": "first"}])
    writer.write_warnings([{"message": "second"}])

    saved = json.loads((tmp_path / "warnings.json").read_text(encoding="utf-8"))
    assert [w["message"] for w in saved] == ["first", "second"]
    assert writer.artifact_names() == ["warnings.json"]


def test_run_artifact_writer_persists_errors_with_their_cause(tmp_path):
    writer = RunArtifactWriter(tmp_path)
    try:
        try:
            raise OSError("disk gone")
        except OSError as exc:
            raise MeshIOError("cannot read mesh.ply") from exc
    except MeshIOError as exc:
        payload = writer.write_error(exc, "load", {"remediation_hint": "check the path"})

    saved = json.loads((tmp_path / "errors" / "error.json").read_text(encoding="utf-8"))
    assert saved == payload["error"]
    assert saved["stage"] == "load"
    assert saved["code"] == "MESH_IO"
    assert saved["exit_code"] == 3
    assert saved["remediation_hint"] == "check the path"
    assert saved["cause_chain"] == [{"exception_type": "OSError", "message": "disk gone"}]
    assert "MeshIOError" in (tmp_path / "errors" / "traceback.txt").read_text(encoding="utf-8")


def test_warning_collector_only_sees_package_warnings():
    with WarningCollector() as collector:
        logging.getLogger("pc_tsp.sampling").warning("low rank %d", 3)
        logging.getLogger("pc_tsp.sampling").info("ignored")
        logging.getLogger("elsewhere").warning("ignored")
    logging.getLogger("pc_tsp.sampling").warning("after exit")

    assert collector.records == [
        {"logger": "pc_tsp.sampling", "level": "WARNING", "message": "low rank 3"}
    ]


def test_default_run_dir_is_unique(tmp_path):
    first = default_run_dir(tmp_path, subdir="spectrum")
    second = default_run_dir(tmp_path, subdir="spectrum")

    assert first.parent == tmp_path / "spectrum"
    assert first != second
    assert first.is_dir() and second.is_dir()
