"""Whitney-weighted Hodge Laplacians of a triangle complex.

    L1 = M1 B1^T M0^-1 B1 M1 + B2 M2 B2^T
    L2 = M2 B2^T M1^-1 B2 M2

The inverses use the lumped diagonals (``lumped``), sparse LU solves with the consistent
matrices (``consistent-solve``), or drop out entirely (``identity``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from pc_tsp.config.settings import MetricMode
from pc_tsp.core.complex import SimplicialComplex2
from pc_tsp.errors import AssemblyError, DimensionMismatchError
from pc_tsp.metrics.whitney import MetricMatrices

logger = logging.getLogger("pc_tsp.operators.laplacians")

SYMMETRY_TOL = 1e-12


class LaplacianVariant(str, Enum):
    full_L1 = "full_L1"
    down_only = "down_only"
    up_only = "up_only"


@dataclass(frozen=True)
class HodgeLaplacian1:
    down: sparse.csr_matrix
    up: sparse.csr_matrix
    full: sparse.csr_matrix
    metric_mode: MetricMode

    def variant(self, name: LaplacianVariant | str) -> sparse.csr_matrix:
        name = LaplacianVariant(name)
        if name is LaplacianVariant.down_only:
            return self.down
        if name is LaplacianVariant.up_only:
            return self.up
        return self.full


@dataclass(frozen=True)
class HodgeLaplacian2:
    L2: sparse.csr_matrix
    metric_mode: MetricMode


def _check_dims(complex_: SimplicialComplex2, metrics: MetricMatrices) -> None:
    expected = (complex_.n_vertices, complex_.n_edges, complex_.n_triangles)
    if metrics.shape != expected:
        raise DimensionMismatchError(
            f"metric matrices have sizes {metrics.shape}, complex has (N, E, T) = {expected}"
        )


def symmetrize(matrix: sparse.spmatrix, name: str) -> sparse.csr_matrix:
    """Average with the transpose; a correction above ``SYMMETRY_TOL`` is an assembly bug."""
    matrix = sparse.csr_matrix(matrix)
    scale = abs(matrix).max() if matrix.nnz else 0.0
    asymmetry = abs(matrix - matrix.T).max() if matrix.nnz else 0.0
    if scale > 0 and asymmetry > SYMMETRY_TOL * scale:
        raise AssemblyError(f"{name} asymmetry {asymmetry:.3e} exceeds {SYMMETRY_TOL:g} relative")
    return sparse.csr_matrix(0.5 * (matrix + matrix.T))


def _apply_inverse(
    consistent: sparse.csr_matrix, lumped: np.ndarray, rhs: sparse.spmatrix, mode: MetricMode
) -> sparse.spmatrix | np.ndarray:
    if mode is MetricMode.identity:
        return rhs
    if mode is MetricMode.lumped:
        return sparse.diags(1.0 / lumped) @ rhs
    return splu(sparse.csc_matrix(consistent)).solve(np.asarray(rhs.toarray()))


def build_l1(complex_: SimplicialComplex2, metrics: MetricMatrices) -> HodgeLaplacian1:
    _check_dims(complex_, metrics)
    mode = metrics.mode
    B1 = complex_.B1.astype(np.float64)
    B2 = complex_.B2.astype(np.float64)

    B1M1 = sparse.csr_matrix(B1 @ metrics.M1)
    down = B1M1.T @ _apply_inverse(metrics.M0, metrics.m0_lumped, B1M1, mode)
    up = B2 @ metrics.M2 @ B2.T

    down = symmetrize(down, "L1_down")
    up = symmetrize(up, "L1_up")
    full = sparse.csr_matrix(down + up)
    logger.info(
        "Built L1 (%s): E=%d nnz(down)=%d nnz(up)=%d", mode.value, full.shape[0], down.nnz, up.nnz
    )
    return HodgeLaplacian1(down=down, up=up, full=full, metric_mode=mode)


def build_l2(complex_: SimplicialComplex2, metrics: MetricMatrices) -> HodgeLaplacian2:
    _check_dims(complex_, metrics)
    mode = metrics.mode
    B2 = complex_.B2.astype(np.float64)

    B2M2 = sparse.csr_matrix(B2 @ metrics.M2)
    L2 = B2M2.T @ _apply_inverse(metrics.M1, metrics.m1_lumped, B2M2, mode)
    L2 = symmetrize(L2, "L2")
    logger.info("Built L2 (%s): T=%d nnz=%d", mode.value, L2.shape[0], L2.nnz)
    return HodgeLaplacian2(L2=L2, metric_mode=mode)
