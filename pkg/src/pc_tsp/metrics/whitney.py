"""Whitney inner-product (mass) matrices of 0-, 1- and 2-forms on a triangle complex.

For a triangle with barycentric functions phi_a, phi_b, phi_c:

* 0-forms are the hat functions phi_i,
* 1-forms are W_ab = phi_a grad(phi_b) - phi_b grad(phi_a) for each edge a < b,
* the 2-form is the constant 1 / area.

Assembly accumulates per-triangle blocks in triangle-index order, so results are reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from pc_tsp.config.settings import MetricMode
from pc_tsp.core.complex import (
    DEGENERACY_TOL,
    LOCAL_EDGES,
    SimplicialComplex2,
)
from pc_tsp.errors import DegenerateTriangleError, MeshQualityError, OffPlaneError

logger = logging.getLogger("pc_tsp.metrics.whitney")

PLANE_TOL = 1e-9

# Barycentric coordinates of the three edge midpoints; weight area / 3 each.
MIDPOINT_RULE = np.array(
    [
        [0.5, 0.5, 0.0],
        [0.0, 0.5, 0.5],
        [0.5, 0.0, 0.5],
    ]
)


@dataclass(frozen=True)
class WhitneyBasisEval:
    values: np.ndarray
    gradients: np.ndarray


@dataclass(frozen=True)
class MetricMatrices:
    """Whitney mass matrices of one complex.

    ``M0``/``M1`` are the consistent (Gram) matrices; ``m0_lumped``/``m1_lumped`` hold the
    diagonals used wherever a matrix is inverted in ``lumped`` mode. ``M2`` is always diagonal.
    """

    M0: sparse.csr_matrix
    M1: sparse.csr_matrix
    M2: sparse.csr_matrix
    m0_lumped: np.ndarray
    m1_lumped: np.ndarray
    mode: MetricMode

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.M0.shape[0], self.M1.shape[0], self.M2.shape[0]


def eval_whitney_0(vertices: np.ndarray, p: np.ndarray) -> WhitneyBasisEval:
    """Barycentric values at ``p`` and the constant gradients of a triangle's hat functions."""
    vertices = np.asarray(vertices, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    p0, p1, p2 = vertices
    cross = np.cross(p1 - p0, p2 - p0)
    norm_sq = float(cross @ cross)
    longest_sq = max(
        float((p1 - p0) @ (p1 - p0)), float((p2 - p0) @ (p2 - p0)), float((p2 - p1) @ (p2 - p1))
    )
    if 0.5 * np.sqrt(norm_sq) < DEGENERACY_TOL * longest_sq:
        raise DegenerateTriangleError(f"triangle {vertices.tolist()} is degenerate")

    normal = cross / np.sqrt(norm_sq)
    diameter = np.sqrt(longest_sq)
    offset = abs(float(normal @ (p - p0)))
    if offset > PLANE_TOL * diameter:
        raise OffPlaneError(f"point {p.tolist()} lies {offset:.3e} off the triangle plane")

    gradients = _hat_gradients(vertices[None, :, :], cross[None, :], np.array([norm_sq]))[0]
    values = 1.0 + np.einsum("ij,ij->i", gradients, p[None, :] - vertices)
    return WhitneyBasisEval(values=values, gradients=gradients)


def _hat_gradients(corners: np.ndarray, cross: np.ndarray, norm_sq: np.ndarray) -> np.ndarray:
    # grad(phi_i) = c x (p_k - p_j) / |c|^2 with (i, j, k) cyclic and c = (p1 - p0) x (p2 - p0)
    scaled = cross / norm_sq[:, None]
    opposite = np.stack(
        [
            corners[:, 2] - corners[:, 1],
            corners[:, 0] - corners[:, 2],
            corners[:, 1] - corners[:, 0],
        ],
        axis=1,
    )
    return np.cross(scaled[:, None, :], opposite)


def barycentric_gradients(complex_: SimplicialComplex2) -> np.ndarray:
    """(T, 3, 3) gradients of the hat functions of each triangle's sorted vertices."""
    corners = complex_.positions[complex_.triangles]
    cross = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    norm_sq = np.einsum("ij,ij->i", cross, cross)
    return _hat_gradients(corners, cross, norm_sq)


def triangle_areas(complex_: SimplicialComplex2) -> np.ndarray:
    corners = complex_.positions[complex_.triangles]
    cross = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    return 0.5 * np.linalg.norm(cross, axis=1)


def _assemble(blocks: np.ndarray, index: np.ndarray, size: int) -> sparse.csr_matrix:
    rows = np.repeat(index, 3, axis=1).ravel()
    cols = np.tile(index, (1, 3)).ravel()
    return sparse.coo_matrix((blocks.ravel(), (rows, cols)), shape=(size, size)).tocsr()


def mass_matrix_0(complex_: SimplicialComplex2) -> tuple[sparse.csr_matrix, np.ndarray]:
    """Consistent M0 and its lumped (row-sum) diagonal."""
    areas = triangle_areas(complex_)
    local = (np.ones((3, 3)) + np.eye(3)) / 12.0
    blocks = areas[:, None, None] * local[None, :, :]
    M0 = _assemble(blocks, complex_.triangles, complex_.n_vertices)
    lumped = np.asarray(M0.sum(axis=1)).ravel()
    return M0, lumped


def whitney_1_at(lam: np.ndarray, gradients: np.ndarray) -> np.ndarray:
    """Local edge 1-forms of every triangle at barycentric point ``lam``: shape (T, 3, 3)."""
    i, j = LOCAL_EDGES[:, 0], LOCAL_EDGES[:, 1]
    return lam[i][None, :, None] * gradients[:, j, :] - lam[j][None, :, None] * gradients[:, i, :]


def local_mass_1(gradients: np.ndarray, areas: np.ndarray) -> np.ndarray:
    """(T, 3, 3) local 1-form Gram blocks by the edge-midpoint rule (exact for quadratics)."""
    blocks = np.zeros((gradients.shape[0], 3, 3))
    for lam in MIDPOINT_RULE:
        W = whitney_1_at(lam, gradients)
        blocks += np.einsum("tei,tfi->tef", W, W)
    return blocks * (areas / 3.0)[:, None, None]


def mass_matrix_1(complex_: SimplicialComplex2) -> tuple[sparse.csr_matrix, np.ndarray]:
    """Consistent M1 and its lumped diagonal.

    The lumped entry of an edge is the row sum of |M1|: signed row sums change with the arbitrary
    edge orientations and turn negative on meshes with sharp angles. Raises MeshQualityError when
    a lumped entry is not strictly positive and finite.
    """
    gradients = barycentric_gradients(complex_)
    blocks = local_mass_1(gradients, triangle_areas(complex_))
    M1 = _assemble(blocks, complex_.triangle_edges, complex_.n_edges)
    M1 = 0.5 * (M1 + M1.T)
    lumped = np.asarray(abs(M1).sum(axis=1)).ravel()
    bad = ~(np.isfinite(lumped) & (lumped > 0.0))
    if bad.any():
        e = int(np.flatnonzero(bad)[0])
        raise MeshQualityError(
            f"lumped M1 entry of edge {e} {complex_.edges[e].tolist()} is {lumped[e]:.3e} <= 0"
        )
    return M1.tocsr(), lumped


def mass_matrix_2(complex_: SimplicialComplex2) -> sparse.csr_matrix:
    return sparse.diags(1.0 / triangle_areas(complex_), format="csr")


def assemble_metrics(
    complex_: SimplicialComplex2, mode: MetricMode | str = MetricMode.lumped
) -> MetricMatrices:
    mode = MetricMode(mode)
    if mode is MetricMode.identity:
        N, E, T = complex_.n_vertices, complex_.n_edges, complex_.n_triangles
        return MetricMatrices(
            M0=sparse.identity(N, format="csr"),
            M1=sparse.identity(E, format="csr"),
            M2=sparse.identity(T, format="csr"),
            m0_lumped=np.ones(N),
            m1_lumped=np.ones(E),
            mode=mode,
        )

    M0, m0_lumped = mass_matrix_0(complex_)
    M1, m1_lumped = mass_matrix_1(complex_)
    M2 = mass_matrix_2(complex_)
    logger.info(
        "Assembled Whitney metrics (%s): nnz(M0)=%d nnz(M1)=%d T=%d",
        mode.value,
        M0.nnz,
        M1.nnz,
        M2.shape[0],
    )
    return MetricMatrices(M0=M0, M1=M1, M2=M2, m0_lumped=m0_lumped, m1_lumped=m1_lumped, mode=mode)
