from __future__ import annotations

import logging

import numpy as np

from pc_tsp.core.complex import PointCloud

logger = logging.getLogger("pc_tsp.synthesis.colors")

_CHANNELS = "RGB"


def assign_coordinate_colors(points: PointCloud) -> np.ndarray:
    """RGB = coordinates normalized per axis to [0, 1]; a flat axis gives a zero channel."""
    positions = points.positions
    low = positions.min(axis=0)
    span = positions.max(axis=0) - low
    colors = np.zeros_like(positions)
    for axis in range(3):
        if span[axis] > 0:
            colors[:, axis] = (positions[:, axis] - low[axis]) / span[axis]
        else:
            logger.warning(
                "Coordinate axis %d has zero range; channel %s set to 0", axis, _CHANNELS[axis]
            )
    return colors
