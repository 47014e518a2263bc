from __future__ import annotations

import csv
import json
import logging
import traceback
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

logger = logging.getLogger("pc_tsp.experiments.artifacts")


def default_run_dir(base: str | Path | None = None, *, subdir: str | None = None) -> Path:
    base_dir = Path(base) if base else Path("runs")
    if subdir:
        base_dir = base_dir / subdir
    timestamp = datetime.now().strftime("%Y%m%d-%H%M%S")
    run_dir = base_dir / f"{timestamp}__{uuid.uuid4()}"
    run_dir.mkdir(parents=True, exist_ok=True)
    return run_dir


class RunArtifactWriter:
    """Persist experiment results, the run manifest, warnings and errors under one run directory."""

    def __init__(self, run_dir: str | Path):
        self.run_dir = Path(run_dir)
        self.written: List[Path] = []

    def _target(self, name: str) -> Path:
        target = self.run_dir / name
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def register(self, path: Path) -> Path:
        if path not in self.written:
            self.written.append(path)
        return path

    def write_json(self, name: str, content: Any) -> Path:
        target = self._target(name)
        target.write_text(json.dumps(content, indent=2, ensure_ascii=False), encoding="utf-8")
        return self.register(target)

    def write_csv(
        self,
        name: str,
        rows: Iterable[Dict[str, Any]],
        columns: Sequence[str],
        *,
        config_hash: str,
    ) -> Path:
        """CSV with a trailing ``config_hash`` column on every row."""
        target = self._target(name)
        with target.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=[*columns, "config_hash"], lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({**{c: row[c] for c in columns}, "config_hash": config_hash})
        return self.register(target)

    def write_manifest(self, manifest: Dict[str, Any]) -> Path:
        return self.write_json("manifest.json", manifest)

    def write_warnings(self, warnings: List[Dict[str, Any]]) -> Path:
        """Append to warnings.json, keeping entries from earlier writes of the same run."""
        warnings_path = self.run_dir / "warnings.json"
        existing: List[Dict[str, Any]] = []
        if warnings_path.exists():
            try:
                loaded = json.loads(warnings_path.read_text(encoding="utf-8"))
                if isinstance(loaded, list):
                    existing = loaded
            except json.JSONDecodeError:
                existing = []
        return self.write_json("warnings.json", existing + list(warnings))

    def write_error(
        self,
        exc: Exception,
        stage: str,
        extra: Dict[str, Any] | None = None,
    ) -> Dict[str, Any]:
        cause_chain: List[Dict[str, Any]] = []
        seen: set[int] = set()
        current = exc.__cause__ or exc.__context__
        while current and id(current) not in seen:
            seen.add(id(current))
            cause_chain.append(
                {
                    "exception_type": type(current).__name__,
                    "message": str(current),
                }
            )
            current = current.__cause__ or current.__context__

        remediation_hint = None
        if extra and isinstance(extra, dict):
            remediation_hint = extra.get("remediation_hint")
        if not remediation_hint:
            remediation_hint = "Check the configuration and review errors/traceback.txt for details."

        error_payload = {
            "stage": stage,
            "exception_type": type(exc).__name__,
            "code": getattr(exc, "code", None),
            "exit_code": getattr(exc, "exit_code", None),
            "message": str(exc),
            "remediation_hint": remediation_hint,
            "extra": extra or None,
        }
        if cause_chain:
            error_payload["cause_chain"] = cause_chain

        self.write_json("errors/error.json", error_payload)
        traceback_text = "".join(traceback.format_exception(type(exc), exc, exc.__traceback__))
        target = self._target("errors/traceback.txt")
        target.write_text(traceback_text, encoding="utf-8")
        self.register(target)
        return {"error": error_payload, "traceback": traceback_text}

    def artifact_names(self) -> List[str]:
        return [str(p.relative_to(self.run_dir)) for p in self.written]


class WarningCollector(logging.Handler):
    """Collects WARNING records emitted under the ``pc_tsp`` logger during one run."""

    def __init__(self) -> None:
        super().__init__(level=logging.WARNING)
        self.records: List[Dict[str, Any]] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.records.append(
            {"logger": record.name, "level": record.levelname, "message": record.getMessage()}
        )

    def __enter__(self) -> "WarningCollector":
        logging.getLogger("pc_tsp").addHandler(self)
        return self

    def __exit__(self, *exc_info: Any) -> None:
        logging.getLogger("pc_tsp").removeHandler(self)
