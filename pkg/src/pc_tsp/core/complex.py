"""Oriented 2-dimensional geometric simplicial complexes built from triangle meshes.

Simplices are stored with ascending vertex indices; that canonical order fixes every incidence
sign. The source winding of each triangle is kept separately (``winding_sign``) and is only used
for geometric normals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse

from pc_tsp.errors import (
    DegenerateTriangleError,
    DuplicateTriangleError,
    IndexOutOfRangeError,
    IsolatedVertexError,
    MeshValidationError,
)

logger = logging.getLogger("pc_tsp.core.complex")

DEGENERACY_TOL = 1e-14

# Local edges of a sorted triangle (a, b, c): (a, b), (a, c), (b, c) with boundary signs.
LOCAL_EDGES = np.array([[0, 1], [0, 2], [1, 2]], dtype=np.int64)
LOCAL_EDGE_SIGNS = np.array([1, -1, 1], dtype=np.int32)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PointCloud:
    positions: np.ndarray
    attributes: np.ndarray | None = None

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=np.float64)
        if positions.ndim != 2 or positions.shape[1] != 3:
            raise MeshValidationError(f"positions must be an (N, 3) array, got {positions.shape}")
        if positions.shape[0] < 3:
            raise MeshValidationError(f"a point cloud needs at least 3 points, got {positions.shape[0]}")
        if not np.all(np.isfinite(positions)):
            bad = int(np.flatnonzero(~np.isfinite(positions).all(axis=1))[0])
            raise MeshValidationError(f"non-finite coordinate at point {bad}")
        object.__setattr__(self, "positions", _frozen(positions))

        if self.attributes is not None:
            attributes = np.array(self.attributes, dtype=np.float64)
            if attributes.shape != positions.shape:
                raise MeshValidationError(
                    f"attributes must have shape {positions.shape}, got {attributes.shape}"
                )
            object.__setattr__(self, "attributes", _frozen(attributes))

    @property
    def n_points(self) -> int:
        return int(self.positions.shape[0])


@dataclass(frozen=True)
class SimplicialComplex2:
    points: PointCloud
    edges: np.ndarray
    triangles: np.ndarray
    winding_sign: np.ndarray
    source_index: np.ndarray
    triangle_edges: np.ndarray
    B1: sparse.csr_matrix = field(repr=False)
    B2: sparse.csr_matrix = field(repr=False)

    @property
    def positions(self) -> np.ndarray:
        return self.points.positions

    @property
    def n_vertices(self) -> int:
        return self.points.n_points

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])

    def wound_triangles(self) -> np.ndarray:
        """Triangles in their source winding (sorted order, odd ones with the last two swapped)."""
        wound = self.triangles.copy()
        odd = self.winding_sign < 0
        wound[odd, 1], wound[odd, 2] = self.triangles[odd, 2], self.triangles[odd, 1]
        return wound

    def source_triangles(self) -> np.ndarray:
        """Triangles in source winding, in the order they were given to ``build_complex``."""
        out = np.empty_like(self.triangles)
        out[self.source_index] = self.wound_triangles()
        return out

    def vertex_triangle_incidence(self) -> sparse.csr_matrix:
        """N x T 0/1 matrix marking which triangles contain which vertex."""
        T = self.n_triangles
        rows = self.triangles.ravel()
        cols = np.repeat(np.arange(T), 3)
        data = np.ones(3 * T, dtype=np.int32)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n_vertices, T))

    def edge_index(self, i: int, j: int) -> int:
        """Index of edge {i, j} in the canonical edge list."""
        a, b = (i, j) if i < j else (j, i)
        keys = self.edges[:, 0] * self.n_vertices + self.edges[:, 1]
        key = a * self.n_vertices + b
        pos = int(np.searchsorted(keys, key))
        if pos >= len(keys) or keys[pos] != key:
            raise KeyError(f"edge ({i}, {j}) not in complex")
        return pos

    def stats(self) -> dict[str, int]:
        return {
            "N": self.n_vertices,
            "E": self.n_edges,
            "T": self.n_triangles,
            "chi": euler_characteristic(self),
        }


@dataclass(frozen=True)
class TriangleGeometry:
    """Per-triangle geometry, one row per triangle in canonical order."""

    normals: np.ndarray
    areas: np.ndarray
    barycenters: np.ndarray
    projectors: np.ndarray

    def __len__(self) -> int:
        return int(self.areas.shape[0])


def _winding_parity(tris: np.ndarray) -> np.ndarray:
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    inversions = (a > b).astype(np.int64) + (a > c) + (b > c)
    return np.where(inversions % 2 == 0, 1, -1).astype(np.int8)


def _cross_and_scale(positions: np.ndarray, tris: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p0 = positions[tris[:, 0]]
    p1 = positions[tris[:, 1]]
    p2 = positions[tris[:, 2]]
    cross = np.cross(p1 - p0, p2 - p0)
    sides = np.stack(
        [
            np.einsum("ij,ij->i", p1 - p0, p1 - p0),
            np.einsum("ij,ij->i", p2 - p0, p2 - p0),
            np.einsum("ij,ij->i", p2 - p1, p2 - p1),
        ],
        axis=1,
    )
    return cross, sides.max(axis=1)


def degenerate_triangles(positions: np.ndarray, tris: np.ndarray) -> np.ndarray:
    """Mask of triangles whose area is below ``DEGENERACY_TOL`` times the squared longest side."""
    cross, longest_sq = _cross_and_scale(positions, tris)
    area = 0.5 * np.linalg.norm(cross, axis=1)
    return area < DEGENERACY_TOL * longest_sq


def build_complex(points: PointCloud, triangle_list: Sequence[Sequence[int]] | np.ndarray) -> SimplicialComplex2:
    """Build the oriented complex (edges, incidence matrices) of a triangle mesh."""
    N = points.n_points
    tris = np.asarray(triangle_list)
    if tris.size == 0:
        raise MeshValidationError("a complex needs at least one triangle")
    if tris.ndim != 2 or tris.shape[1] != 3:
        raise MeshValidationError(f"triangles must be vertex triples, got shape {tris.shape}")
    if not np.issubdtype(tris.dtype, np.integer):
        if not np.all(np.equal(np.mod(tris, 1), 0)):
            raise MeshValidationError("triangle vertex indices must be integers")
    tris = tris.astype(np.int64)

    out_of_range = (tris < 0) | (tris >= N)
    if out_of_range.any():
        t = int(np.flatnonzero(out_of_range.any(axis=1))[0])
        raise IndexOutOfRangeError(
            f"triangle {t} references vertex {tris[t].tolist()} outside [0, {N})"
        )
    repeated = (tris[:, 0] == tris[:, 1]) | (tris[:, 0] == tris[:, 2]) | (tris[:, 1] == tris[:, 2])
    if repeated.any():
        t = int(np.flatnonzero(repeated)[0])
        raise DegenerateTriangleError(f"triangle {t} repeats a vertex: {tris[t].tolist()}")

    degenerate = degenerate_triangles(points.positions, tris)
    if degenerate.any():
        t = int(np.flatnonzero(degenerate)[0])
        raise DegenerateTriangleError(f"triangle {t} {tris[t].tolist()} has (near) zero area")

    winding = _winding_parity(tris)
    sorted_tris = np.sort(tris, axis=1)
    order = np.lexsort((sorted_tris[:, 2], sorted_tris[:, 1], sorted_tris[:, 0]))
    sorted_tris = sorted_tris[order]
    winding = winding[order]

    same = np.all(sorted_tris[1:] == sorted_tris[:-1], axis=1)
    if same.any():
        k = int(np.flatnonzero(same)[0])
        first, second = sorted((int(order[k]), int(order[k + 1])))
        raise DuplicateTriangleError(
            f"triangle {second} duplicates triangle {first}: {sorted_tris[k].tolist()}"
        )

    used = np.zeros(N, dtype=bool)
    used[sorted_tris.ravel()] = True
    if not used.all():
        v = int(np.flatnonzero(~used)[0])
        raise IsolatedVertexError(f"vertex {v} belongs to no triangle")

    T = sorted_tris.shape[0]
    sides = sorted_tris[:, LOCAL_EDGES].reshape(-1, 2)
    edges, inverse = np.unique(sides, axis=0, return_inverse=True)
    triangle_edges = inverse.reshape(T, 3).astype(np.int64)
    E = edges.shape[0]

    b1_rows = edges.ravel()
    b1_cols = np.repeat(np.arange(E), 2)
    b1_data = np.tile(np.array([-1, 1], dtype=np.int32), E)
    B1 = sparse.csr_matrix((b1_data, (b1_rows, b1_cols)), shape=(N, E))

    b2_rows = triangle_edges.ravel()
    b2_cols = np.repeat(np.arange(T), 3)
    b2_data = np.tile(LOCAL_EDGE_SIGNS, T)
    B2 = sparse.csr_matrix((b2_data, (b2_rows, b2_cols)), shape=(E, T))

    logger.debug("Built complex N=%d E=%d T=%d", N, E, T)
    return SimplicialComplex2(
        points=points,
        edges=_frozen(edges.astype(np.int64)),
        triangles=_frozen(sorted_tris),
        winding_sign=_frozen(winding),
        source_index=_frozen(order.astype(np.int64)),
        triangle_edges=_frozen(triangle_edges),
        B1=B1,
        B2=B2,
    )


def triangle_geometry(complex_: SimplicialComplex2) -> TriangleGeometry:
    """Normals (source winding), areas, barycenters and tangential projectors of all triangles."""
    positions = complex_.positions
    wound = complex_.wound_triangles()
    cross, longest_sq = _cross_and_scale(positions, wound)
    norm = np.linalg.norm(cross, axis=1)
    bad = 0.5 * norm < DEGENERACY_TOL * longest_sq
    if bad.any():
        t = int(np.flatnonzero(bad)[0])
        raise DegenerateTriangleError(f"triangle {t} {complex_.triangles[t].tolist()} is degenerate")

    normals = cross / norm[:, None]
    areas = 0.5 * norm
    barycenters = positions[complex_.triangles].mean(axis=1)
    projectors = np.eye(3)[None, :, :] - np.einsum("ti,tj->tij", normals, normals)
    return TriangleGeometry(
        normals=_frozen(normals),
        areas=_frozen(areas),
        barycenters=_frozen(barycenters),
        projectors=_frozen(projectors),
    )


def euler_characteristic(complex_: SimplicialComplex2) -> int:
    return complex_.n_vertices - complex_.n_edges + complex_.n_triangles
