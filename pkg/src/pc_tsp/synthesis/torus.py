"""Parametric torus tessellation."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from pc_tsp.core.complex import PointCloud
from pc_tsp.errors import ConfigError

logger = logging.getLogger("pc_tsp.synthesis.torus")


@dataclass(frozen=True)
class TorusSpec:
    """Torus of major radius R and minor radius r sampled on a u_steps x v_steps angle grid.

    ``alternate_diagonals`` flips the quad split on every other cell; the default splits every
    quad along the (u, v) -> (u+1, v+1) diagonal.
    """

    major_radius: float = 2.0
    minor_radius: float = 0.7
    u_steps: int = 30
    v_steps: int = 20
    alternate_diagonals: bool = False

    def __post_init__(self) -> None:
        if not (self.major_radius > self.minor_radius > 0):
            raise ConfigError(
                f"torus radii must satisfy R > r > 0, got R={self.major_radius}, r={self.minor_radius}"
            )
        if self.u_steps < 3 or self.v_steps < 3:
            raise ConfigError(
                f"torus grid needs at least 3 steps per direction, got {self.u_steps}x{self.v_steps}"
            )

    @property
    def n_points(self) -> int:
        return self.u_steps * self.v_steps


def _vertex_id(spec: TorusSpec, i: int, j: int) -> int:
    return (i % spec.u_steps) * spec.v_steps + (j % spec.v_steps)


def make_torus(spec: TorusSpec | None = None) -> tuple[PointCloud, np.ndarray]:
    """Grid vertices and outward-wound triangles; coordinates shifted to start at 0 on each axis."""
    spec = spec or TorusSpec()
    theta = 2.0 * np.pi * np.arange(spec.u_steps) / spec.u_steps
    phi = 2.0 * np.pi * np.arange(spec.v_steps) / spec.v_steps
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    ring = spec.major_radius + spec.minor_radius * np.cos(ph)
    positions = np.stack(
        [ring * np.cos(th), ring * np.sin(th), spec.minor_radius * np.sin(ph)], axis=-1
    ).reshape(-1, 3)
    positions = positions - positions.min(axis=0)

    triangles = []
    for i in range(spec.u_steps):
        for j in range(spec.v_steps):
            v00 = _vertex_id(spec, i, j)
            v10 = _vertex_id(spec, i + 1, j)
            v01 = _vertex_id(spec, i, j + 1)
            v11 = _vertex_id(spec, i + 1, j + 1)
            if spec.alternate_diagonals and (i + j) % 2:
                triangles.append((v00, v10, v01))
                triangles.append((v10, v11, v01))
            else:
                triangles.append((v00, v10, v11))
                triangles.append((v00, v11, v01))

    logger.debug(
        "Torus R=%g r=%g grid %dx%d", spec.major_radius, spec.minor_radius, spec.u_steps, spec.v_steps
    )
    return PointCloud(positions=positions), np.asarray(triangles, dtype=np.int64)
