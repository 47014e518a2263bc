from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from pc_tsp.errors import DimensionMismatchError, UnrecoverableSamplingError
from pc_tsp.sampling.maxdet import BandlimitedModel, SamplingSet

logger = logging.getLogger("pc_tsp.sampling.recovery")


@dataclass(frozen=True)
class RecoveryResult:
    signal: np.ndarray
    cond_estimate: float


def sample(signal: np.ndarray, sampling: SamplingSet) -> np.ndarray:
    """D_S s, kept at full length with zeros off the sampling set."""
    signal = np.asarray(signal, dtype=np.float64)
    if signal.shape != sampling.mask.shape:
        raise DimensionMismatchError(
            f"signal has length {signal.shape[0]}, sampling mask has {sampling.mask.shape[0]}"
        )
    return np.where(sampling.mask, signal, 0.0)


def recover_with_diagnostics(
    y: np.ndarray,
    sampling: SamplingSet,
    model: BandlimitedModel,
    *,
    cond_limit: float = 1e12,
) -> RecoveryResult:
    """Solve [I - (I - D_S) U_K U_K^T] s = y.

    By the Woodbury identity the solution is s = y + (I - D_S) U_K C^-1 U_K^T y with
    C = U_K^T D_S U_K, so only the K x K Gram matrix of the sampled rows is factorised and the
    samples themselves are reproduced exactly.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] != model.dimension or sampling.mask.shape[0] != model.dimension:
        raise DimensionMismatchError(
            f"signal ({y.shape[0]}), mask ({sampling.mask.shape[0]}) and model "
            f"({model.dimension}) dimensions differ"
        )
    K = model.bandwidth
    if sampling.size <= K:
        logger.warning(
            "Sampling set of %d edges does not exceed the bandwidth |K|=%d", sampling.size, K
        )

    U = model.U_K
    rows = U[sampling.mask]
    gram = rows.T @ rows
    eigenvalues = np.linalg.eigvalsh(gram)
    smallest, largest = float(eigenvalues[0]), float(eigenvalues[-1])
    cond = largest / smallest if smallest > 0 else np.inf
    if not np.isfinite(cond) or cond > cond_limit:
        raise UnrecoverableSamplingError(
            f"recovery system is singular for |S|={sampling.size}, |K|={K} "
            f"(condition estimate {cond:.3e})",
            cond_estimate=cond,
        )

    coeffs = scipy.linalg.solve(gram, U.T @ y, assume_a="pos")
    correction = U @ coeffs
    recovered = np.where(sampling.mask, y, y + correction)
    return RecoveryResult(signal=recovered, cond_estimate=cond)


def recover(
    y: np.ndarray,
    sampling: SamplingSet,
    model: BandlimitedModel,
    *,
    cond_limit: float = 1e12,
) -> np.ndarray:
    return recover_with_diagnostics(y, sampling, model, cond_limit=cond_limit).signal
