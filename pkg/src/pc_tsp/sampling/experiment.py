"""Colour-recovery sweep: sample the colour edge signal, recover it, and score the error."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from typing import Sequence

import numpy as np

from pc_tsp.core.complex import SimplicialComplex2
from pc_tsp.errors import ConfigError
from pc_tsp.fields.maps import project_to_edges, reconstruct_vertex_field
from pc_tsp.operators.laplacians import HodgeLaplacian1, LaplacianVariant
from pc_tsp.operators.spectral import SpectralBasis, spectral_basis
from pc_tsp.sampling.maxdet import bandlimited_model, maxdet_select, random_select
from pc_tsp.sampling.recovery import recover_with_diagnostics, sample

logger = logging.getLogger("pc_tsp.sampling.experiment")

RECOVERY_COLUMNS = [
    "n_samples",
    "variant",
    "mse_mean_sq",
    "norm_error",
    "cond_estimate",
    "seed",
    "bandwidth",
    "sampling",
    "vertex_rms",
]


@dataclass(frozen=True)
class RecoveryRecord:
    n_samples: int
    variant: str
    mse_mean_sq: float
    norm_error: float
    cond_estimate: float
    seed: int
    bandwidth: int
    sampling: str
    vertex_rms: float
    signal: np.ndarray | None = dataclass_field(default=None, repr=False, compare=False)

    def as_row(self) -> dict:
        return {column: getattr(self, column) for column in RECOVERY_COLUMNS}


def default_bandwidth(n_samples: int, cap: int = 400) -> int:
    """|K| = floor(N_sc / 2), capped, never below 1."""
    return max(1, min(n_samples // 2, cap))


def parse_range(spec: str) -> list[int]:
    """``"100:750:50"`` -> [100, 150, ..., 750]; ``"100,200"`` -> [100, 200]."""
    text = spec.strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                start, stop, step = parts[0], parts[1], 1
            elif len(parts) == 3:
                start, stop, step = parts
            else:
                raise ValueError(text)
            if step <= 0:
                raise ValueError(text)
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid integer grid {spec!r}") from exc


def recovery_experiment(
    complex_: SimplicialComplex2,
    field: np.ndarray,
    k_size: int | None,
    n_samples_grid: Sequence[int],
    laplacian: HodgeLaplacian1,
    variants: Sequence[LaplacianVariant | str] = (
        LaplacianVariant.full_L1,
        LaplacianVariant.down_only,
    ),
    *,
    sampling: str = "maxdet",
    seed: int = 0,
    bandwidth_cap: int = 400,
    cond_limit: float = 1e12,
    dense_threshold: int = 500,
    max_workers: int = 4,
    keep_signals: bool = False,
) -> list[RecoveryRecord]:
    """Recover the projected colour signal for every (variant, N_sc) grid point.

    Records come back variant-major in grid order; ``keep_signals`` attaches each recovered edge
    signal to its record.
    """
    E = complex_.n_edges
    grid = [int(n) for n in n_samples_grid]
    if not grid:
        raise ConfigError("n_samples grid is empty")
    if min(grid) < 1 or max(grid) > E:
        raise ConfigError(f"n_samples grid must lie in [1, {E}], got {min(grid)}..{max(grid)}")
    sampling = getattr(sampling, "value", sampling)
    if sampling not in {"maxdet", "random"}:
        raise ConfigError(f"unknown sampling strategy {sampling!r}")
    variants = [LaplacianVariant(v) for v in variants]

    field = np.asarray(field, dtype=np.float64)
    truth = project_to_edges(field, complex_)
    bandwidths = [k_size if k_size else default_bandwidth(n, bandwidth_cap) for n in grid]
    max_band = max(bandwidths)
    if max_band > E:
        raise ConfigError(f"bandwidth {max_band} exceeds E={E}")

    bases: dict[LaplacianVariant, SpectralBasis] = {}
    for variant in variants:
        logger.info("Spectral basis for %s: %d of %d pairs", variant.value, max_band, E)
        bases[variant] = spectral_basis(
            laplacian.variant(variant), k=max_band, dense_threshold=dense_threshold
        )

    cells = [
        (v_idx, variant, g_idx, n, bandwidths[g_idx])
        for v_idx, variant in enumerate(variants)
        for g_idx, n in enumerate(grid)
    ]

    def _run_cell(cell: tuple) -> RecoveryRecord:
        v_idx, variant, g_idx, n, band = cell
        model = bandlimited_model(bases[variant], band)
        if sampling == "maxdet":
            chosen = maxdet_select(model, n)
        else:
            chosen = random_select(E, n, np.random.default_rng([seed, v_idx, g_idx]))
        result = recover_with_diagnostics(
            sample(truth, chosen), chosen, model, cond_limit=cond_limit
        )
        error = result.signal - truth
        colours = reconstruct_vertex_field(result.signal, complex_, pseudoinverse=True)
        vertex_rms = float(np.sqrt(np.mean(np.sum((colours - field) ** 2, axis=1))))
        logger.info(
            "%s N_sc=%d |K|=%d: mse=%.3e cond=%.3e",
            variant.value,
            n,
            band,
            float(error @ error) / E,
            result.cond_estimate,
        )
        return RecoveryRecord(
            n_samples=n,
            variant=variant.value,
            mse_mean_sq=float(error @ error) / E,
            norm_error=float(np.linalg.norm(error)),
            cond_estimate=result.cond_estimate,
            seed=seed,
            bandwidth=band,
            sampling=sampling,
            vertex_rms=vertex_rms,
            signal=result.signal if keep_signals else None,
        )

    with ThreadPoolExecutor(max_workers=max(1, min(max_workers, len(cells)))) as executor:
        records = list(executor.map(_run_cell, cells))
    return records
