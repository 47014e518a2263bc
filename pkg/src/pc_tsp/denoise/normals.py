"""Triangle-normal denoising: each Cartesian component is a triangle signal smoothed over L2."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from pc_tsp.config.settings import MetricMode
from pc_tsp.core.complex import SimplicialComplex2
from pc_tsp.denoise.solver import DataTerm, DenoiseProblem, DenoiseSolution, denoise
from pc_tsp.errors import ConfigError, DimensionMismatchError
from pc_tsp.metrics.whitney import assemble_metrics
from pc_tsp.operators.laplacians import HodgeLaplacian2, build_l2
from pc_tsp.operators.spectral import largest_eigenvalue

logger = logging.getLogger("pc_tsp.denoise.normals")

ZERO_NORMAL_TOL = 1e-9


@dataclass(frozen=True)
class NormalDenoiseResult:
    normals: np.ndarray
    raw: np.ndarray
    zero_triangles: np.ndarray
    solutions: tuple[DenoiseSolution, DenoiseSolution, DenoiseSolution]

    @property
    def iterations(self) -> int:
        return max(s.iterations for s in self.solutions)

    @property
    def converged(self) -> bool:
        return all(s.converged for s in self.solutions)


def laplacian_for(
    complex_: SimplicialComplex2, metric_mode: MetricMode | str = MetricMode.lumped
) -> HodgeLaplacian2:
    return build_l2(complex_, assemble_metrics(complex_, metric_mode))


def denoise_normals(
    complex_: SimplicialComplex2,
    noisy_normals: np.ndarray,
    lam: float,
    gamma: float,
    *,
    laplacian: HodgeLaplacian2 | None = None,
    lmax: float | None = None,
    tol: float = 1e-10,
    max_iter: int = 20_000,
    data_term: DataTerm | str = DataTerm.squared,
    power_rtol: float = 1e-6,
) -> NormalDenoiseResult:
    """Denoise the x, y, z components independently with a shared L2, then renormalize.

    Normals follow the source winding while L2 is built on the sorted orientation, so each
    component is multiplied by ``winding_sign`` before the solve and again after it.

    Triangles whose denoised vector has norm below ``ZERO_NORMAL_TOL`` are left as zero vectors
    and listed in ``zero_triangles``.
    """
    noisy = np.asarray(noisy_normals, dtype=np.float64)
    if noisy.shape != (complex_.n_triangles, 3):
        raise DimensionMismatchError(
            f"normals must have shape ({complex_.n_triangles}, 3), got {noisy.shape}"
        )
    if not np.all(np.isfinite(noisy)):
        t = int(np.flatnonzero(~np.isfinite(noisy).all(axis=1))[0])
        raise ConfigError(f"noisy normal of triangle {t} is not finite")

    if laplacian is None:
        laplacian = laplacian_for(complex_)
    L2 = laplacian.L2
    if lmax is None and lam > 0 and DataTerm(data_term) is DataTerm.squared:
        lmax = largest_eigenvalue(L2, rtol=power_rtol)

    sign = complex_.winding_sign.astype(np.float64)
    oriented = sign[:, None] * noisy
    solutions = tuple(
        denoise(
            DenoiseProblem(
                x=oriented[:, axis],
                lam=lam,
                gamma=gamma,
                L2=L2,
                tol=tol,
                max_iter=max_iter,
                data_term=data_term,
                lmax=lmax,
                power_rtol=power_rtol,
            )
        )
        for axis in range(3)
    )
    raw = sign[:, None] * np.column_stack([s.s for s in solutions])
    norms = np.linalg.norm(raw, axis=1)
    zero = norms < ZERO_NORMAL_TOL
    normals = np.zeros_like(raw)
    normals[~zero] = raw[~zero] / norms[~zero, None]
    if zero.any():
        logger.warning(
            "%d triangle(s) shrank to a zero normal (first: triangle %d)",
            int(zero.sum()),
            int(np.flatnonzero(zero)[0]),
        )
    return NormalDenoiseResult(
        normals=normals, raw=raw, zero_triangles=np.flatnonzero(zero), solutions=solutions
    )


def noise_variance(normals: np.ndarray, snr_db: float) -> float:
    """sigma^2 = P / 10^(snr/10), P the mean squared component of the clean normals."""
    if not np.isfinite(snr_db):
        raise ConfigError(f"snr_db must be finite, got {snr_db}")
    power = float(np.mean(np.asarray(normals, dtype=np.float64) ** 2))
    return power / 10.0 ** (snr_db / 10.0)


def add_normal_noise(
    normals: np.ndarray,
    snr_db: float,
    seed: int | np.random.Generator | None = 0,
) -> np.ndarray:
    """Clean normals plus i.i.d. zero-mean Gaussian noise at the requested SNR."""
    normals = np.asarray(normals, dtype=np.float64)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sigma = np.sqrt(noise_variance(normals, snr_db))
    return normals + sigma * rng.standard_normal(normals.shape)


def normal_mse(estimate: np.ndarray, clean: np.ndarray) -> float:
    """Mean over triangles of the squared distance between estimated and clean normals."""
    diff = np.asarray(estimate, dtype=np.float64) - np.asarray(clean, dtype=np.float64)
    return float(np.mean(np.sum(diff * diff, axis=1)))
