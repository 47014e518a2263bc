from __future__ import annotations

import numpy as np
import pytest

from pc_tsp.core.complex import PointCloud, SimplicialComplex2, build_complex
from pc_tsp.synthesis import TorusSpec, make_spheroid, make_torus


def complex_from(positions, triangles) -> SimplicialComplex2:
    return build_complex(PointCloud(positions=np.asarray(positions, dtype=float)), triangles)


def annulus_strip(n: int = 6, inner: float = 1.0, outer: float = 2.0):
    """Planar ring of 2n triangles between two concentric n-gons (one hole)."""
    angles = 2.0 * np.pi * np.arange(n) / n
    ring = np.stack([np.cos(angles), np.sin(angles), np.zeros(n)], axis=1)
    positions = np.vstack([inner * ring, outer * ring])
    triangles = []
    for i in range(n):
        j = (i + 1) % n
        triangles.append((i, n + i, n + j))
        triangles.append((i, n + j, j))
    return positions, np.asarray(triangles)


@pytest.fixture()
def single_triangle() -> SimplicialComplex2:
    return complex_from([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])


@pytest.fixture()
def unit_square() -> SimplicialComplex2:
    return complex_from(
        [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]],
        [[0, 1, 2], [0, 2, 3]],
    )


@pytest.fixture()
def annulus() -> SimplicialComplex2:
    return complex_from(*annulus_strip())


@pytest.fixture(scope="session")
def small_torus() -> SimplicialComplex2:
    points, triangles = make_torus(TorusSpec(u_steps=8, v_steps=6))
    return build_complex(points, triangles)


@pytest.fixture(scope="session")
def default_torus() -> SimplicialComplex2:
    points, triangles = make_torus()
    return build_complex(points, triangles)


@pytest.fixture(scope="session")
def icosphere() -> SimplicialComplex2:
    points, triangles = make_spheroid(1)
    return build_complex(points, triangles)
