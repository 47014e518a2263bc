"""SNR sweep of the normal denoiser: noisy torus (or any mesh) normals against the clean ones."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from itertools import product
from typing import Sequence

import numpy as np

from pc_tsp.core.complex import SimplicialComplex2, triangle_geometry
from pc_tsp.denoise.normals import add_normal_noise, denoise_normals, normal_mse
from pc_tsp.denoise.solver import DataTerm
from pc_tsp.errors import ConfigError
from pc_tsp.operators.laplacians import HodgeLaplacian2
from pc_tsp.operators.spectral import largest_eigenvalue

logger = logging.getLogger("pc_tsp.denoise.experiment")

SNR_COLUMNS = [
    "snr_db",
    "lambda",
    "gamma",
    "trial",
    "mse",
    "iterations",
    "converged",
    "noisy_mse",
]

SUMMARY_COLUMNS = ["snr_db", "lambda", "gamma", "trials", "mse_mean", "mse_std", "noisy_mse_mean"]


@dataclass(frozen=True)
class SnrRecord:
    snr_db: float
    lam: float
    gamma: float
    trial: int
    mse: float
    iterations: int
    converged: bool
    noisy_mse: float

    def as_row(self) -> dict:
        row = asdict(self)
        row["lambda"] = row.pop("lam")
        return {column: row[column] for column in SNR_COLUMNS}


def _non_empty(name: str, values: Sequence[float]) -> list[float]:
    values = [float(v) for v in values]
    if not values:
        raise ConfigError(f"{name} grid is empty")
    return values


def snr_experiment(
    complex_: SimplicialComplex2,
    snr_grid: Sequence[float],
    lambdas: Sequence[float],
    gammas: Sequence[float],
    trials: int,
    seed: int,
    laplacian: HodgeLaplacian2,
    *,
    clean_normals: np.ndarray | None = None,
    tol: float = 1e-10,
    max_iter: int = 20_000,
    data_term: DataTerm | str = DataTerm.squared,
    power_rtol: float = 1e-6,
    max_workers: int = 4,
) -> list[SnrRecord]:
    """Denoise noisy normals for every (snr, lambda, gamma, trial) cell.

    The noise draw of a cell depends only on (seed, snr index, trial), so every (lambda, gamma)
    pair sees the same noisy input and serial and threaded runs agree.
    """
    snr_grid = _non_empty("snr_db", snr_grid)
    lambdas = _non_empty("lambda", lambdas)
    gammas = _non_empty("gamma", gammas)
    if trials < 1:
        raise ConfigError(f"trials must be at least 1, got {trials}")
    if any(v < 0 for v in lambdas + gammas):
        raise ConfigError("lambda and gamma must be >= 0")

    clean = (
        triangle_geometry(complex_).normals
        if clean_normals is None
        else np.asarray(clean_normals, dtype=np.float64)
    )
    lmax = largest_eigenvalue(laplacian.L2, rtol=power_rtol)
    logger.info(
        "SNR sweep: %d SNR x %d lambda x %d gamma x %d trials on T=%d (lambda_max(L2)=%.4g)",
        len(snr_grid),
        len(lambdas),
        len(gammas),
        trials,
        complex_.n_triangles,
        lmax,
    )

    def _run_draw(draw: tuple[int, int]) -> list[SnrRecord]:
        snr_idx, trial = draw
        snr_db = snr_grid[snr_idx]
        noisy = add_normal_noise(clean, snr_db, np.random.default_rng([seed, snr_idx, trial]))
        noisy_mse = normal_mse(noisy, clean)
        records = []
        for lam, gamma in product(lambdas, gammas):
            result = denoise_normals(
                complex_,
                noisy,
                lam,
                gamma,
                laplacian=laplacian,
                lmax=lmax,
                tol=tol,
                max_iter=max_iter,
                data_term=data_term,
                power_rtol=power_rtol,
            )
            records.append(
                SnrRecord(
                    snr_db=snr_db,
                    lam=lam,
                    gamma=gamma,
                    trial=trial,
                    mse=normal_mse(result.normals, clean),
                    iterations=result.iterations,
                    converged=result.converged,
                    noisy_mse=noisy_mse,
                )
            )
        logger.debug("SNR %.1f dB trial %d done (noisy mse %.4e)", snr_db, trial, noisy_mse)
        return records

    draws = [(i, t) for i in range(len(snr_grid)) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=max(1, min(max_workers, len(draws)))) as executor:
        batches = list(executor.map(_run_draw, draws))

    # batches are (snr, trial)-major; rows are reported (snr, lambda, gamma, trial)-major
    n_pairs = len(lambdas) * len(gammas)
    return [
        batches[snr_idx * trials + trial][pair]
        for snr_idx in range(len(snr_grid))
        for pair in range(n_pairs)
        for trial in range(trials)
    ]


def summarize_snr(records: Sequence[SnrRecord]) -> list[dict]:
    """Mean and spread of the MSE per (snr, lambda, gamma), in first-seen order."""
    groups: dict[tuple[float, float, float], list[SnrRecord]] = {}
    for record in records:
        groups.setdefault((record.snr_db, record.lam, record.gamma), []).append(record)

    rows = []
    for (snr_db, lam, gamma), members in groups.items():
        mse = np.array([m.mse for m in members])
        rows.append(
            {
                "snr_db": snr_db,
                "lambda": lam,
                "gamma": gamma,
                "trials": len(members),
                "mse_mean": float(mse.mean()),
                "mse_std": float(mse.std()),
                "noisy_mse_mean": float(np.mean([m.noisy_mse for m in members])),
            }
        )
    return rows
