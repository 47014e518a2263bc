"""Wavefront OBJ reader and writer backed by ``trimesh``.

Vertex colours use the common ``v x y z r g b`` extension. trimesh keeps them as 8-bit, so
colours survive a round trip to within 1/255.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import trimesh

from pc_tsp.core.complex import PointCloud
from pc_tsp.errors import MeshIOError, MeshValidationError

from .ply import colors_to_uint8

logger = logging.getLogger("pc_tsp.mesh_io.obj")


def _reject_polygons(path: Path) -> None:
    # trimesh triangulates polygons on load, so check the face records before it sees them
    with path.open("r", encoding="utf-8", errors="replace") as stream:
        face = 0
        for line in stream:
            tokens = line.split()
            if not tokens or tokens[0] != "f":
                continue
            if len(tokens) != 4:
                raise MeshValidationError(
                    f"face {face} has {len(tokens) - 1} vertices; "
                    "only triangular faces are supported",
                    code="NON_TRIANGULAR_FACE",
                )
            face += 1


def read_obj(path: str | Path) -> tuple[PointCloud, np.ndarray]:
    path = Path(path)
    try:
        _reject_polygons(path)
        mesh = trimesh.load_mesh(str(path), file_type="obj", process=False, maintain_order=True)
    except OSError as exc:
        raise MeshIOError(f"cannot read {path}: {exc}") from exc
    except (ValueError, IndexError, KeyError) as exc:
        raise MeshIOError(f"{path}: malformed OBJ ({exc})") from exc

    if not isinstance(mesh, trimesh.Trimesh) or len(mesh.faces) == 0:
        raise MeshIOError(f"{path}: no faces")
    attributes = None
    if mesh.visual.kind == "vertex":
        attributes = np.asarray(mesh.visual.vertex_colors[:, :3], dtype=np.float64) / 255.0
    logger.info("Read %s: %d vertices, %d faces", path, len(mesh.vertices), len(mesh.faces))
    return PointCloud(positions=np.asarray(mesh.vertices, dtype=np.float64), attributes=attributes), (
        np.asarray(mesh.faces, dtype=np.int64)
    )


def write_obj(
    path: str | Path,
    points: PointCloud,
    triangles: np.ndarray,
    *,
    colors: np.ndarray | None = None,
) -> Path:
    path = Path(path)
    if colors is None:
        colors = points.attributes
    mesh = trimesh.Trimesh(
        vertices=points.positions,
        faces=np.asarray(triangles, dtype=np.int64),
        vertex_colors=colors_to_uint8(colors) if colors is not None else None,
        process=False,
    )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        mesh.export(
            str(path),
            file_type="obj",
            include_normals=False,
            include_texture=False,
            include_color=colors is not None,
        )
    except OSError as exc:
        raise MeshIOError(f"cannot write {path}: {exc}") from exc
    return path
