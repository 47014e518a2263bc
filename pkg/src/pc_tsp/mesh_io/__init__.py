"""Mesh and matrix file formats."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from pc_tsp.core.complex import PointCloud
from pc_tsp.errors import MeshIOError

from .matrix_market import export_matrices
from .obj import read_obj, write_obj
from .ply import read_ply, write_ply

MESH_SUFFIXES = (".ply", ".obj")


def read_mesh(path: str | Path) -> tuple[PointCloud, np.ndarray]:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in MESH_SUFFIXES and not path.is_file():
        raise MeshIOError(f"mesh file not found: {path}", detail="Check the --input path.")
    if suffix == ".ply":
        return read_ply(path)
    if suffix == ".obj":
        return read_obj(path)
    raise MeshIOError(f"unsupported mesh format {path.suffix!r}; expected one of {MESH_SUFFIXES}")


def write_mesh(
    path: str | Path,
    points: PointCloud,
    triangles: np.ndarray,
    *,
    colors: np.ndarray | None = None,
    normals: np.ndarray | None = None,
) -> Path:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".ply":
        return write_ply(path, points, triangles, colors=colors, normals=normals)
    if suffix == ".obj":
        return write_obj(path, points, triangles, colors=colors)
    raise MeshIOError(f"unsupported mesh format {path.suffix!r}; expected one of {MESH_SUFFIXES}")


__all__ = [
    "MESH_SUFFIXES",
    "export_matrices",
    "read_mesh",
    "read_obj",
    "read_ply",
    "write_mesh",
    "write_obj",
    "write_ply",
]
