"""Eigenbases of Hodge Laplacians and the Simplicial Fourier Transform."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from pc_tsp.errors import DimensionMismatchError, SpectralConvergenceError

logger = logging.getLogger("pc_tsp.operators.spectral")

SIGN_TOL = 1e-8


@dataclass(frozen=True)
class SpectralBasis:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def count(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.eigenvectors.shape[0])


def _canonical_signs(vectors: np.ndarray) -> np.ndarray:
    significant = np.abs(vectors) > SIGN_TOL
    first = np.argmax(significant, axis=0)
    pivots = vectors[first, np.arange(vectors.shape[1])]
    signs = np.where(pivots < 0, -1.0, 1.0)
    return vectors * signs[None, :]


def _dense_pairs(L: sparse.spmatrix | np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    dense = L.toarray() if sparse.issparse(L) else np.asarray(L, dtype=np.float64)
    values, vectors = scipy.linalg.eigh(dense, subset_by_index=[0, k - 1])
    return values, vectors


def _lanczos_pairs(
    L: sparse.spmatrix, k: int, *, max_iter: int, tol: float
) -> tuple[np.ndarray, np.ndarray]:
    n = L.shape[0]
    # Shift just below zero so that L - sigma I is positive definite for a PSD operator
    scale = float(abs(L).sum(axis=1).max()) or 1.0
    sigma = -1e-6 * scale
    v0 = np.random.default_rng(0).standard_normal(n)
    try:
        values, vectors = eigsh(
            sparse.csc_matrix(L),
            k=k,
            sigma=sigma,
            which="LM",
            v0=v0,
            maxiter=max_iter,
            tol=tol,
        )
    except ArpackNoConvergence as exc:
        raise SpectralConvergenceError(
            f"Lanczos did not converge for k={k} on an operator of size {n}",
            detail=f"{len(exc.eigenvalues)} of {k} pairs converged",
        ) from exc
    return values, vectors


def spectral_basis(
    L: sparse.spmatrix | np.ndarray,
    k: int | str = "all",
    *,
    dense_threshold: int = 500,
    max_iter: int = 10_000,
    tol: float = 0.0,
) -> SpectralBasis:
    """The ``k`` smallest eigenpairs of a symmetric PSD operator, ascending.

    Every eigenvector is signed so that its first entry above 1e-8 in magnitude is positive.
    """
    n = L.shape[0]
    if L.shape != (n, n):
        raise DimensionMismatchError(f"operator must be square, got {L.shape}")
    count = n if k == "all" else int(k)
    if not 1 <= count <= n:
        raise DimensionMismatchError(f"k must be in [1, {n}], got {k}")

    # Lanczos stays efficient only for a small slice of the spectrum
    if n < dense_threshold or 5 * count >= n or not sparse.issparse(L):
        logger.debug("Dense eigendecomposition n=%d k=%d", n, count)
        values, vectors = _dense_pairs(L, count)
    else:
        logger.debug("Shift-invert Lanczos n=%d k=%d", n, count)
        values, vectors = _lanczos_pairs(L, count, max_iter=max_iter, tol=tol)

    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = _canonical_signs(vectors[:, order])
    values.setflags(write=False)
    vectors.setflags(write=False)
    return SpectralBasis(eigenvalues=values, eigenvectors=vectors)


def sft(basis: SpectralBasis, signal: np.ndarray) -> np.ndarray:
    """Forward Simplicial Fourier Transform: U^T s over the computed pairs."""
    signal = np.asarray(signal, dtype=np.float64)
    if signal.shape[0] != basis.dimension:
        raise DimensionMismatchError(
            f"signal has length {signal.shape[0]}, basis dimension is {basis.dimension}"
        )
    return basis.eigenvectors.T @ signal


def isft(basis: SpectralBasis, coeffs: np.ndarray) -> np.ndarray:
    """Inverse transform U c; ``coeffs`` may cover a prefix of the basis."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape[0] > basis.count:
        raise DimensionMismatchError(
            f"{coeffs.shape[0]} coefficients exceed the {basis.count} computed eigenpairs"
        )
    return basis.eigenvectors[:, : coeffs.shape[0]] @ coeffs


def largest_eigenvalue(
    L: sparse.spmatrix | np.ndarray, *, rtol: float = 1e-6, max_iter: int = 10_000
) -> float:
    """Largest eigenvalue of a symmetric PSD operator.

    Power iteration gives a Rayleigh quotient, which approaches the top eigenvalue from below.
    A Lanczos solve started from the power vector then sharpens it; the larger of the two is
    returned, and callers that need an upper bound still add a margin.
    """
    n = L.shape[0]
    if n < 3:
        dense = L.toarray() if sparse.issparse(L) else np.asarray(L, dtype=np.float64)
        return float(np.linalg.eigvalsh(dense).max()) if n else 0.0
    x = np.random.default_rng(0).standard_normal(n)
    x /= np.linalg.norm(x)
    estimate = 0.0
    for _ in range(max_iter):
        y = L @ x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0
        new_estimate = float(x @ y)
        x = y / norm
        if abs(new_estimate - estimate) <= rtol * abs(new_estimate):
            estimate = new_estimate
            break
        estimate = new_estimate
    else:
        logger.warning("Power iteration hit %d iterations; estimate %.6g", max_iter, estimate)
    try:
        top = eigsh(L, k=1, which="LA", v0=x, tol=rtol, return_eigenvectors=False)
    except ArpackNoConvergence:
        logger.debug("Lanczos refinement of the top eigenvalue did not converge")
        return estimate
    return max(estimate, float(top[0]))
