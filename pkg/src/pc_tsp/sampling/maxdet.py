"""Bandlimited edge-signal models and sampling-set selection."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pc_tsp.errors import ConfigError, DimensionMismatchError
from pc_tsp.operators.spectral import SpectralBasis

logger = logging.getLogger("pc_tsp.sampling.maxdet")

RANK_TOL = 1e-12


@dataclass(frozen=True)
class BandlimitedModel:
    indices: np.ndarray
    U_K: np.ndarray

    @property
    def bandwidth(self) -> int:
        return int(self.indices.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.U_K.shape[0])


@dataclass(frozen=True)
class SamplingSet:
    order: np.ndarray
    mask: np.ndarray

    @property
    def size(self) -> int:
        return int(self.order.shape[0])

    @classmethod
    def from_indices(cls, indices: Sequence[int] | np.ndarray, dimension: int) -> "SamplingSet":
        order = np.asarray(indices, dtype=np.int64)
        if order.size and (order.min() < 0 or order.max() >= dimension):
            raise DimensionMismatchError(f"sample indices must lie in [0, {dimension})")
        if np.unique(order).size != order.size:
            raise ConfigError("sample indices must be distinct")
        mask = np.zeros(dimension, dtype=bool)
        mask[order] = True
        order.setflags(write=False)
        mask.setflags(write=False)
        return cls(order=order, mask=mask)


def bandlimited_model(
    basis: SpectralBasis, band: int | Sequence[int] | np.ndarray
) -> BandlimitedModel:
    """Model spanned by the ``band`` lowest eigenvectors, or by an explicit index set."""
    if np.isscalar(band):
        indices = np.arange(int(band))
    else:
        indices = np.unique(np.asarray(band, dtype=np.int64))
    if indices.size == 0:
        raise ConfigError("bandwidth must be at least 1")
    if indices[0] < 0 or indices[-1] >= basis.count:
        raise DimensionMismatchError(
            f"frequency indices must lie in [0, {basis.count}), got up to {int(indices[-1])}"
        )
    U_K = np.ascontiguousarray(basis.eigenvectors[:, indices])
    return BandlimitedModel(indices=indices, U_K=U_K)


def maxdet_select(model: BandlimitedModel, n_samples: int) -> SamplingSet:
    """Greedy MaxDet sampling set.

    Each step adds the edge maximising (rank, log pseudo-determinant) of U_K(S)^T U_K(S).
    While a rank increase is possible the pseudo-determinant grows by the squared residual of
    the candidate row against the span of the selected rows; afterwards by 1 + u^T G^+ u.
    Ties go to the smallest edge index.
    """
    E, K = model.U_K.shape
    if n_samples < 1:
        raise ConfigError(f"n_samples must be at least 1, got {n_samples}")
    if n_samples > E:
        raise ConfigError(f"n_samples={n_samples} exceeds the number of edges E={E}")

    U = model.U_K
    row_norms = np.einsum("ij,ij->i", U, U)
    residual = U.copy()
    residual_sq = row_norms.copy()
    selected = np.zeros(E, dtype=bool)
    order: list[int] = []
    trace = 0.0
    rank = 0

    # Phase 1: rank-increasing picks (Gram-Schmidt on the rows)
    while len(order) < n_samples and rank < K:
        threshold = RANK_TOL * (trace + row_norms)
        candidates = (~selected) & (residual_sq > threshold)
        if not candidates.any():
            break
        scores = np.where(candidates, residual_sq, -np.inf)
        m = int(np.argmax(scores))
        q = residual[m] / np.sqrt(residual_sq[m])
        residual -= np.outer(residual @ q, q)
        residual_sq = np.einsum("ij,ij->i", residual, residual)
        selected[m] = True
        order.append(m)
        trace += row_norms[m]
        rank += 1

    # Phase 2: rank-preserving picks, det grows by 1 + u^T G^+ u
    if len(order) < n_samples:
        rows = U[np.asarray(order, dtype=np.int64)]
        gram = rows.T @ rows
        W = U @ np.linalg.pinv(gram, hermitian=True)
        full_rank = rank == K
        while len(order) < n_samples:
            leverage = np.einsum("ij,ij->i", W, U)
            scores = np.where(selected, -np.inf, leverage)
            m = int(np.argmax(scores))
            selected[m] = True
            order.append(m)
            if full_rank:
                # Sherman-Morrison update of W = U G^-1
                Wu = U @ W[m]
                W = W - np.outer(Wu, W[m]) / (1.0 + leverage[m])
            else:
                gram += np.outer(U[m], U[m])
                W = U @ np.linalg.pinv(gram, hermitian=True)

    logger.debug("MaxDet selected %d of %d edges (|K|=%d, rank=%d)", len(order), E, K, rank)
    return SamplingSet.from_indices(order, E)


def random_select(dimension: int, n_samples: int, rng: np.random.Generator) -> SamplingSet:
    """Uniformly random sampling set of ``n_samples`` distinct edges."""
    if not 1 <= n_samples <= dimension:
        raise ConfigError(f"n_samples must be in [1, {dimension}], got {n_samples}")
    return SamplingSet.from_indices(rng.choice(dimension, size=n_samples, replace=False), dimension)
