"""Sparsity-regularised smoothing of triangle signals.

    F(s) = ||s - x||_2^2 + lam s^T L2 s + gamma ||s||_1      (squared data term, default)
    F(s) = ||s - x||_2   + lam s^T L2 s + gamma ||s||_1      (unsquared data term)

The squared objective is minimised by accelerated proximal gradient with a function-value
restart, the unsquared one by consensus ADMM.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from pc_tsp.errors import ConfigError, DimensionMismatchError
from pc_tsp.operators.spectral import largest_eigenvalue

logger = logging.getLogger("pc_tsp.denoise.solver")

# Gradient-mapping residual accepted at termination, relative to 1 + ||x||_inf
RESIDUAL_TOL = 1e-9
# largest_eigenvalue is a Rayleigh estimate, never a certified upper bound
LIPSCHITZ_MARGIN = 1.01
# Objective increase (relative to max(1, |F|)) still accepted as a descent step
ACCEPT_SLACK = 1e-12


class DataTerm(str, Enum):
    squared = "squared"
    unsquared = "unsquared"


@dataclass(frozen=True)
class DenoiseProblem:
    x: np.ndarray
    lam: float
    gamma: float
    L2: sparse.spmatrix
    tol: float = 1e-10
    max_iter: int = 20_000
    data_term: DataTerm = DataTerm.squared
    lmax: float | None = None
    power_rtol: float = 1e-6

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=np.float64)
        if x.ndim != 1:
            raise DimensionMismatchError(f"x must be a 1-D triangle signal, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ConfigError("noisy signal contains non-finite values")
        if self.L2.shape != (x.shape[0], x.shape[0]):
            raise DimensionMismatchError(
                f"L2 has shape {self.L2.shape}, signal has length {x.shape[0]}"
            )
        if self.lam < 0 or self.gamma < 0:
            raise ConfigError(f"lambda and gamma must be >= 0, got {self.lam}, {self.gamma}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "data_term", DataTerm(self.data_term))

    def objective(self, s: np.ndarray) -> float:
        r = s - self.x
        data = float(r @ r) if self.data_term is DataTerm.squared else float(np.linalg.norm(r))
        return data + self.lam * float(s @ (self.L2 @ s)) + self.gamma * float(np.abs(s).sum())


@dataclass(frozen=True)
class DenoiseSolution:
    s: np.ndarray
    objective: float
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list, repr=False)


def soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def denoise(problem: DenoiseProblem) -> DenoiseSolution:
    if problem.data_term is DataTerm.unsquared:
        return _denoise_admm(problem)
    return _denoise_fista(problem)


def _denoise_fista(problem: DenoiseProblem) -> DenoiseSolution:
    x, lam, gamma, L2 = problem.x, problem.lam, problem.gamma, problem.L2
    if lam > 0:
        lmax = problem.lmax
        if lmax is None:
            lmax = largest_eigenvalue(L2, rtol=problem.power_rtol)
        lipschitz = 2.0 * (1.0 + lam * lmax * LIPSCHITZ_MARGIN)
    else:
        lipschitz = 2.0
    step = 1.0 / lipschitz
    residual_tol = RESIDUAL_TOL * (1.0 + float(np.abs(x).max(initial=0.0)))

    def gradient(v: np.ndarray) -> np.ndarray:
        return 2.0 * (v - x) + 2.0 * lam * (L2 @ v)

    def prox_step(v: np.ndarray) -> np.ndarray:
        return soft_threshold(v - step * gradient(v), gamma * step)

    def try_polish(v: np.ndarray, f_v: float) -> tuple[np.ndarray, float] | None:
        # Final proximal step; its output satisfies the subgradient conditions up to the residual
        polished = prox_step(v)
        if lipschitz * float(np.linalg.norm(v - polished)) > residual_tol:
            return None
        f_p = problem.objective(polished)
        if f_p <= f_v + ACCEPT_SLACK * max(1.0, abs(f_v)):
            return polished, f_p
        return v, f_v

    s = x.copy()
    f_s = problem.objective(s)
    y = s.copy()
    t = 1.0
    history = [f_s]
    converged = False
    restarted = False
    iterations = 0

    for iterations in range(1, problem.max_iter + 1):
        z = prox_step(y)
        f_z = problem.objective(z)
        if f_z > f_s + ACCEPT_SLACK * max(1.0, abs(f_s)):
            if restarted:
                # A plain proximal step from s no longer decreases F
                polished = try_polish(s, f_s)
                if polished is not None:
                    s, f_s = polished
                    converged = True
                break
            # Restart the momentum from the last accepted iterate
            y = s.copy()
            t = 1.0
            restarted = True
            continue

        restarted = False
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = z + ((t - 1.0) / t_next) * (z - s)
        change = abs(f_s - f_z)
        s, f_s, t = z, f_z, t_next
        history.append(f_s)

        if change <= problem.tol * max(1.0, abs(f_s)):
            polished = try_polish(s, f_s)
            if polished is not None:
                s, f_s = polished
                converged = True
                break

    if not converged:
        logger.warning(
            "Proximal gradient stopped without convergence after %d iterations (objective %.6e)",
            iterations,
            f_s,
        )
    return DenoiseSolution(
        s=s, objective=f_s, iterations=iterations, converged=converged, history=history
    )


def _prox_distance(v: np.ndarray, center: np.ndarray, t: float) -> np.ndarray:
    """prox of t * ||. - center||_2."""
    d = v - center
    norm = float(np.linalg.norm(d))
    if norm <= t:
        return center.copy()
    return center + (1.0 - t / norm) * d


def _denoise_admm(problem: DenoiseProblem, rho: float = 1.0) -> DenoiseSolution:
    x, lam, gamma = problem.x, problem.lam, problem.gamma
    n = x.shape[0]
    # s-update: (2 lam L2 + 2 rho I) s = rho (z1 - u1 + z2 - u2)
    system = splu(sparse.csc_matrix(2.0 * lam * problem.L2 + 2.0 * rho * sparse.identity(n)))

    s = x.copy()
    z1, z2 = x.copy(), x.copy()
    u1, u2 = np.zeros(n), np.zeros(n)
    best, f_best = s.copy(), problem.objective(s)
    history = [f_best]
    converged = False
    iterations = 0
    abs_tol = np.sqrt(problem.tol) * np.sqrt(n)

    for iterations in range(1, problem.max_iter + 1):
        s = system.solve(rho * (z1 - u1 + z2 - u2))
        z1_old, z2_old = z1, z2
        z1 = _prox_distance(s + u1, x, 1.0 / rho)
        z2 = soft_threshold(s + u2, gamma / rho)
        u1 += s - z1
        u2 += s - z2

        f_z = problem.objective(z2)
        if f_z <= f_best:
            best, f_best = z2.copy(), f_z
        history.append(f_z)

        primal = np.sqrt(np.sum((s - z1) ** 2) + np.sum((s - z2) ** 2))
        dual = rho * np.sqrt(np.sum((z1 - z1_old) ** 2) + np.sum((z2 - z2_old) ** 2))
        scale = 1.0 + float(np.linalg.norm(s))
        if primal <= abs_tol * scale and dual <= abs_tol * scale:
            converged = True
            break

    if not converged:
        logger.warning("ADMM stopped at the %d-iteration cap", problem.max_iter)
    return DenoiseSolution(
        s=best, objective=f_best, iterations=iterations, converged=converged, history=history
    )
