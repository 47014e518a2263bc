"""PLY reader and writer for triangle meshes, on top of ``plyfile``.

Vertices carry x/y/z and optional red/green/blue; faces carry a vertex index list that must have
length 3. Colours are 8-bit on disk and floats in [0, 1] in memory.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
from plyfile import PlyData, PlyElement, PlyParseError

from pc_tsp.core.complex import PointCloud
from pc_tsp.errors import MeshIOError, MeshValidationError

logger = logging.getLogger("pc_tsp.mesh_io.ply")

FACE_INDEX_NAMES = ("vertex_indices", "vertex_index")
COLOR_CHANNELS = ("red", "green", "blue")


def _face_indices(face: PlyElement, path: Path) -> np.ndarray:
    names = face.data.dtype.names or ()
    name = next((n for n in FACE_INDEX_NAMES if n in names), None)
    if name is None:
        raise MeshIOError(f"{path}: face element has no vertex_indices list")
    column = face.data[name]
    if column.dtype != object:
        # fixed-length rows come back as a (T, k) subarray
        column = list(column)
    lengths = np.fromiter((len(row) for row in column), dtype=np.int64, count=len(column))
    bad = np.flatnonzero(lengths != 3)
    if bad.size:
        raise MeshValidationError(
            f"face {int(bad[0])} has {int(lengths[bad[0]])} vertices; "
            "only triangular faces are supported",
            code="NON_TRIANGULAR_FACE",
        )
    if not len(column):
        return np.empty((0, 3), dtype=np.int64)
    return np.vstack(column).astype(np.int64)


def _colors_from(vertex: PlyElement) -> np.ndarray | None:
    names = vertex.data.dtype.names or ()
    if not all(c in names for c in COLOR_CHANNELS):
        return None
    colors = np.column_stack([np.asarray(vertex[c], dtype=np.float64) for c in COLOR_CHANNELS])
    # integer channels are 8-bit; float channels are already in [0, 1]
    if vertex.data.dtype["red"].kind in "iu":
        colors = colors / 255.0
    return colors


def read_ply(path: str | Path) -> tuple[PointCloud, np.ndarray]:
    """Point cloud (with colours when present) and the (T, 3) face index array in file order."""
    path = Path(path)
    try:
        ply = PlyData.read(str(path))
    except OSError as exc:
        raise MeshIOError(f"cannot read {path}: {exc}") from exc
    except (PlyParseError, ValueError, IndexError, EOFError) as exc:
        raise MeshIOError(f"{path}: malformed PLY ({exc})") from exc

    elements = {element.name: element for element in ply.elements}
    vertex, face = elements.get("vertex"), elements.get("face")
    if vertex is None or face is None:
        raise MeshIOError(f"{path}: PLY needs both 'vertex' and 'face' elements")
    names = vertex.data.dtype.names or ()
    for axis in "xyz":
        if axis not in names:
            raise MeshIOError(f"{path}: vertex element lacks property {axis!r}")

    positions = np.column_stack([np.asarray(vertex[a], dtype=np.float64) for a in "xyz"])
    triangles = _face_indices(face, path)
    colors = _colors_from(vertex)
    logger.info(
        "Read %s: %d vertices, %d faces (%s)",
        path,
        len(positions),
        len(triangles),
        "ascii" if ply.text else "binary",
    )
    return PointCloud(positions=positions, attributes=colors), triangles


def colors_to_uint8(colors: np.ndarray) -> np.ndarray:
    """[0, 1] floats to 8-bit, clamped, round half up."""
    clamped = np.clip(np.asarray(colors, dtype=np.float64), 0.0, 1.0)
    return np.floor(clamped * 255.0 + 0.5).astype(np.uint8)


def write_ply(
    path: str | Path,
    points: PointCloud,
    triangles: np.ndarray,
    *,
    colors: np.ndarray | None = None,
    normals: np.ndarray | None = None,
    binary: bool = True,
) -> Path:
    """Write vertices (double x/y/z, optional uchar rgb) and faces (optional float normals)."""
    path = Path(path)
    positions = points.positions
    triangles = np.asarray(triangles, dtype=np.int64)
    if colors is None:
        colors = points.attributes
    rgb = colors_to_uint8(colors) if colors is not None else None
    if normals is not None:
        normals = np.asarray(normals, dtype=np.float64)
        if normals.shape != triangles.shape:
            raise MeshIOError(f"normals shape {normals.shape} does not match faces {triangles.shape}")

    vertex_fields = [("x", "f8"), ("y", "f8"), ("z", "f8")]
    if rgb is not None:
        vertex_fields += [(c, "u1") for c in COLOR_CHANNELS]
    vertices = np.empty(len(positions), dtype=vertex_fields)
    for axis, name in enumerate("xyz"):
        vertices[name] = positions[:, axis]
    if rgb is not None:
        for axis, name in enumerate(COLOR_CHANNELS):
            vertices[name] = rgb[:, axis]

    face_fields = [("vertex_indices", "i4", (3,))]
    if normals is not None:
        face_fields += [("nx", "f4"), ("ny", "f4"), ("nz", "f4")]
    faces = np.empty(len(triangles), dtype=face_fields)
    faces["vertex_indices"] = triangles
    if normals is not None:
        for axis, name in enumerate(("nx", "ny", "nz")):
            faces[name] = normals[:, axis]

    ply = PlyData(
        [
            PlyElement.describe(vertices, "vertex"),
            PlyElement.describe(faces, "face", len_types={"vertex_indices": "u1"}),
        ],
        text=not binary,
        byte_order="<",
        comments=["pc-tsp"],
    )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        ply.write(str(path))
    except OSError as exc:
        raise MeshIOError(f"cannot write {path}: {exc}") from exc
    logger.debug("Wrote %s (%d vertices, %d faces)", path, len(positions), len(triangles))
    return path
