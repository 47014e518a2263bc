from __future__ import annotations

import logging
from pathlib import Path
from typing import Mapping

from scipy import sparse
from scipy.io import mmwrite

from pc_tsp.errors import MeshIOError

logger = logging.getLogger("pc_tsp.mesh_io.matrix_market")


def export_matrices(directory: str | Path, matrices: Mapping[str, sparse.spmatrix]) -> list[Path]:
    """Write each matrix to ``<directory>/<name>.mtx``; returns the written paths in order."""
    directory = Path(directory)
    written = []
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for name, matrix in matrices.items():
            target = directory / f"{name}.mtx"
            mmwrite(str(target), sparse.coo_matrix(matrix), comment=f"pc-tsp {name}")
            written.append(target)
    except OSError as exc:
        raise MeshIOError(f"cannot export matrices to {directory}: {exc}") from exc
    logger.info("Exported %d matrices to %s", len(written), directory)
    return written
