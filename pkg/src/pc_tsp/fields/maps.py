"""Maps between vertex vector fields, edge scalar signals and triangle tangent fields.

    vertices --project_to_edges--> edges --whitney_reconstruct_barycenter--> triangles
    triangles --lift_to_vertices--> vertices

All three maps are linear; colours are never clamped here.
"""

from __future__ import annotations

import logging

import numpy as np

from pc_tsp.core.complex import LOCAL_EDGES, SimplicialComplex2, triangle_geometry
from pc_tsp.errors import DimensionMismatchError, NonRecoverableVertexError
from pc_tsp.metrics.whitney import barycentric_gradients

logger = logging.getLogger("pc_tsp.fields.maps")

OUT_OF_PLANE_TOL = 1e-9


def _as_vertex_field(field: np.ndarray, complex_: SimplicialComplex2) -> np.ndarray:
    field = np.asarray(field, dtype=np.float64)
    if field.shape != (complex_.n_vertices, 3):
        raise DimensionMismatchError(
            f"vertex field must have shape ({complex_.n_vertices}, 3), got {field.shape}"
        )
    return field


def project_to_edges(field: np.ndarray, complex_: SimplicialComplex2) -> np.ndarray:
    """Trapezoidal line integral of a vertex field along every canonically oriented edge."""
    field = _as_vertex_field(field, complex_)
    tail, head = complex_.edges[:, 0], complex_.edges[:, 1]
    direction = complex_.positions[head] - complex_.positions[tail]
    return 0.5 * np.einsum("ij,ij->i", direction, field[tail] + field[head])


def whitney_reconstruct_barycenter(signal: np.ndarray, complex_: SimplicialComplex2) -> np.ndarray:
    """Tangential vector of each triangle at its barycenter from the Whitney edge basis.

    With every barycentric coordinate equal to 1/3 the edge form W_ab reduces to
    (grad(phi_b) - grad(phi_a)) / 3.
    """
    signal = np.asarray(signal, dtype=np.float64)
    if signal.shape != (complex_.n_edges,):
        raise DimensionMismatchError(
            f"edge signal must have length {complex_.n_edges}, got {signal.shape}"
        )
    gradients = barycentric_gradients(complex_)
    tails, heads = LOCAL_EDGES[:, 0], LOCAL_EDGES[:, 1]
    forms = (gradients[:, heads, :] - gradients[:, tails, :]) / 3.0
    local = signal[complex_.triangle_edges]
    return np.einsum("te,tei->ti", local, forms)


def lift_to_vertices(
    tri_field: np.ndarray,
    complex_: SimplicialComplex2,
    *,
    pseudoinverse: bool = False,
    rank_tol: float = 1e-10,
) -> np.ndarray:
    """Least-squares vertex vectors consistent with the incident triangles' tangent vectors.

    Solves (sum T_s) v_i = sum T_s v(s) over the triangles s incident to vertex i, using
    T_s^T T_s = T_s. Where the normal matrix has an eigenvalue below ``rank_tol`` times its largest
    (all incident faces coplanar) the minimum-norm solution is taken. That is only an error when
    some incident observation has a component along the missing direction, which the lift would
    drop; ``pseudoinverse`` accepts the loss.
    """
    tri_field = np.asarray(tri_field, dtype=np.float64)
    if tri_field.shape != (complex_.n_triangles, 3):
        raise DimensionMismatchError(
            f"triangle field must have shape ({complex_.n_triangles}, 3), got {tri_field.shape}"
        )
    projectors = triangle_geometry(complex_).projectors
    observed = np.einsum("tij,tj->ti", projectors, tri_field)

    N = complex_.n_vertices
    normal_matrices = np.zeros((N, 3, 3))
    rhs = np.zeros((N, 3))
    for corner in range(3):
        vertices = complex_.triangles[:, corner]
        np.add.at(normal_matrices, vertices, projectors)
        np.add.at(rhs, vertices, observed)

    eigenvalues, eigenvectors = np.linalg.eigh(normal_matrices)
    largest = eigenvalues[:, -1:]
    kept = eigenvalues > rank_tol * largest
    deficient = ~kept.all(axis=1)
    if deficient.any() and not pseudoinverse:
        lost = _out_of_plane_vertices(tri_field, complex_, eigenvectors, ~kept)
        if lost.size:
            raise NonRecoverableVertexError(lost.tolist())
    if deficient.any():
        logger.debug("Minimum-norm lifting at %d rank-deficient vertices", int(deficient.sum()))

    coords = np.einsum("nji,nj->ni", eigenvectors, rhs)
    safe = np.where(kept, eigenvalues, 1.0)
    coords = np.where(kept, coords / safe, 0.0)
    return np.einsum("nij,nj->ni", eigenvectors, coords)


def _out_of_plane_vertices(
    tri_field: np.ndarray,
    complex_: SimplicialComplex2,
    eigenvectors: np.ndarray,
    dropped: np.ndarray,
) -> np.ndarray:
    """Vertices where an incident observation leans into a direction the lift cannot see."""
    null_projectors = np.einsum(
        "nik,nk,njk->nij", eigenvectors, dropped.astype(np.float64), eigenvectors
    )
    scale = 1.0 + np.linalg.norm(tri_field, axis=1)
    lost = np.zeros(complex_.n_vertices, dtype=bool)
    for corner in range(3):
        vertices = complex_.triangles[:, corner]
        leak = np.einsum("tij,tj->ti", null_projectors[vertices], tri_field)
        np.logical_or.at(lost, vertices, np.linalg.norm(leak, axis=1) > OUT_OF_PLANE_TOL * scale)
    return np.flatnonzero(lost)


def color_roundtrip(
    field: np.ndarray,
    complex_: SimplicialComplex2,
    *,
    pseudoinverse: bool = False,
    rank_tol: float = 1e-10,
) -> np.ndarray:
    """Vertex field -> edge signal -> barycenter tangents -> vertex field."""
    signal = project_to_edges(field, complex_)
    return reconstruct_vertex_field(
        signal, complex_, pseudoinverse=pseudoinverse, rank_tol=rank_tol
    )


def reconstruct_vertex_field(
    signal: np.ndarray,
    complex_: SimplicialComplex2,
    *,
    pseudoinverse: bool = False,
    rank_tol: float = 1e-10,
) -> np.ndarray:
    """Vertex vectors from an edge signal (barycenter reconstruction then lifting)."""
    tangents = whitney_reconstruct_barycenter(signal, complex_)
    return lift_to_vertices(tangents, complex_, pseudoinverse=pseudoinverse, rank_tol=rank_tol)
