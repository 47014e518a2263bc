"""Icosphere-based spheroids."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from pc_tsp.core.complex import PointCloud
from pc_tsp.errors import ConfigError

MAX_SUBDIVISIONS = 7

_GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0

ICOSAHEDRON_VERTICES = np.array(
    [
        [-1, _GOLDEN, 0],
        [1, _GOLDEN, 0],
        [-1, -_GOLDEN, 0],
        [1, -_GOLDEN, 0],
        [0, -1, _GOLDEN],
        [0, 1, _GOLDEN],
        [0, -1, -_GOLDEN],
        [0, 1, -_GOLDEN],
        [_GOLDEN, 0, -1],
        [_GOLDEN, 0, 1],
        [-_GOLDEN, 0, -1],
        [-_GOLDEN, 0, 1],
    ],
    dtype=np.float64,
)

# Outward (counter-clockwise seen from outside) winding
ICOSAHEDRON_FACES = np.array(
    [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ],
    dtype=np.int64,
)


def _subdivide(vertices: list[np.ndarray], faces: np.ndarray) -> np.ndarray:
    midpoints: dict[tuple[int, int], int] = {}

    def midpoint(a: int, b: int) -> int:
        key = (a, b) if a < b else (b, a)
        if key not in midpoints:
            p = 0.5 * (vertices[a] + vertices[b])
            vertices.append(p / np.linalg.norm(p))
            midpoints[key] = len(vertices) - 1
        return midpoints[key]

    out = []
    for a, b, c in faces.tolist():
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
    return np.asarray(out, dtype=np.int64)


def make_spheroid(
    n_subdiv: int = 2, radii: Sequence[float] = (1.0, 1.0, 1.0)
) -> tuple[PointCloud, np.ndarray]:
    """Unit icosphere after ``n_subdiv`` midpoint subdivisions, scaled per axis by ``radii``."""
    if not 0 <= n_subdiv <= MAX_SUBDIVISIONS:
        raise ConfigError(f"n_subdiv must be in [0, {MAX_SUBDIVISIONS}], got {n_subdiv}")
    radii = np.asarray(radii, dtype=np.float64)
    if radii.shape != (3,) or not np.all(radii > 0):
        raise ConfigError(f"radii must be three positive numbers, got {radii.tolist()}")

    vertices = [v / np.linalg.norm(v) for v in ICOSAHEDRON_VERTICES]
    faces = ICOSAHEDRON_FACES
    for _ in range(n_subdiv):
        faces = _subdivide(vertices, faces)
    positions = np.asarray(vertices) * radii
    return PointCloud(positions=positions), faces
