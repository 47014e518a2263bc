from __future__ import annotations

import numpy as np
import pytest

from pc_tsp.config.settings import MetricMode
from pc_tsp.core.complex import PointCloud, build_complex
from pc_tsp.errors import DegenerateTriangleError, OffPlaneError
from pc_tsp.metrics.whitney import (
    assemble_metrics,
    eval_whitney_0,
    mass_matrix_0,
    mass_matrix_1,
    mass_matrix_2,
    triangle_areas,
)
from pc_tsp.synthesis import TorusSpec, make_torus
from tests.conftest import complex_from

RIGHT_TRIANGLE = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def test_hat_functions_on_right_triangle() -> None:
    basis = eval_whitney_0(RIGHT_TRIANGLE, np.array([0.25, 0.25, 0.0]))

    assert np.allclose(basis.values, [0.5, 0.25, 0.25])
    assert np.allclose(basis.gradients, [[-1, -1, 0], [1, 0, 0], [0, 1, 0]])


def test_hat_functions_form_a_partition_of_unity() -> None:
    rng = np.random.default_rng(3)
    vertices = rng.standard_normal((3, 3))
    weights = np.array([0.2, 0.3, 0.5])
    p = weights @ vertices
    basis = eval_whitney_0(vertices, p)

    assert np.allclose(basis.values, weights)
    assert np.allclose(basis.gradients.sum(axis=0), 0.0)
    # grad(phi_i) . (p_j - p_i) = -1 along each edge leaving vertex i
    for i in range(3):
        j = (i + 1) % 3
        assert basis.gradients[i] @ (vertices[j] - vertices[i]) == pytest.approx(-1.0)


def test_point_off_the_plane_is_rejected() -> None:
    with pytest.raises(OffPlaneError):
        eval_whitney_0(RIGHT_TRIANGLE, np.array([0.2, 0.2, 1e-3]))


def test_degenerate_triangle_is_rejected() -> None:
    with pytest.raises(DegenerateTriangleError):
        eval_whitney_0(np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0]]), np.zeros(3))


def test_vertex_mass_matrix_of_one_triangle(single_triangle) -> None:
    M0, lumped = mass_matrix_0(single_triangle)

    expected = 0.5 / 12.0 * (np.ones((3, 3)) + np.eye(3))
    assert np.allclose(M0.toarray(), expected)
    assert np.allclose(lumped, [1 / 6, 1 / 6, 1 / 6])


def test_edge_mass_matrix_of_right_triangle(single_triangle) -> None:
    M1, lumped = mass_matrix_1(single_triangle)

    expected = np.array(
        [
            [1 / 3, 1 / 6, 0.0],
            [1 / 6, 1 / 3, 0.0],
            [0.0, 0.0, 1 / 6],
        ]
    )
    assert np.allclose(M1.toarray(), expected)
    assert np.allclose(lumped, [0.5, 0.5, 1 / 6])


def test_triangle_mass_matrix(unit_square) -> None:
    assert np.allclose(mass_matrix_2(unit_square).toarray(), np.diag([2.0, 2.0]))


def test_vertex_mass_integrates_constants(small_torus) -> None:
    M0, lumped = mass_matrix_0(small_torus)
    total_area = triangle_areas(small_torus).sum()

    assert M0.sum() == pytest.approx(total_area)
    assert lumped.sum() == pytest.approx(total_area)


def test_edge_mass_matrix_is_spd_and_lumping_dominates(small_torus) -> None:
    M1, lumped = mass_matrix_1(small_torus)
    dense = M1.toarray()

    assert np.allclose(dense, dense.T)
    assert np.linalg.eigvalsh(dense).min() > 0
    assert np.all(lumped >= dense.diagonal() - 1e-15)


def test_lumped_edge_mass_ignores_edge_orientation() -> None:
    square = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=float)
    triangles = [[0, 1, 2], [0, 2, 3]]
    relabel = [2, 0, 3, 1]
    a = complex_from(square, triangles)
    b = complex_from(square[np.argsort(relabel)], [[relabel[v] for v in t] for t in triangles])

    _, lumped_a = mass_matrix_1(a)
    _, lumped_b = mass_matrix_1(b)
    for e, (u, v) in enumerate(a.edges.tolist()):
        assert lumped_b[b.edge_index(relabel[u], relabel[v])] == pytest.approx(lumped_a[e])


def test_identity_mode(small_torus) -> None:
    metrics = assemble_metrics(small_torus, MetricMode.identity)

    assert metrics.shape == (small_torus.n_vertices, small_torus.n_edges, small_torus.n_triangles)
    assert np.array_equal(metrics.M1.toarray(), np.eye(small_torus.n_edges))
    assert np.all(metrics.m0_lumped == 1.0)


def test_assembly_is_reproducible(small_torus) -> None:
    first = assemble_metrics(small_torus, "lumped")
    second = assemble_metrics(small_torus, "lumped")

    assert np.array_equal(first.M1.toarray(), second.M1.toarray())
    assert np.array_equal(first.m1_lumped, second.m1_lumped)


def test_mass_matrices_survive_a_rigid_motion() -> None:
    points, triangles = make_torus(TorusSpec(u_steps=8, v_steps=6))
    q, r = np.linalg.qr(np.random.default_rng(4).standard_normal((3, 3)))
    rotation = q * np.sign(np.diag(r))
    if np.linalg.det(rotation) < 0:
        rotation[:, 0] *= -1.0
    moved = points.positions @ rotation.T + np.array([3.0, -1.0, 2.5])
    original = build_complex(points, triangles)
    shifted = build_complex(PointCloud(positions=moved), triangles)

    for assemble in (mass_matrix_0, mass_matrix_1):
        (full_a, lumped_a), (full_b, lumped_b) = assemble(original), assemble(shifted)
        assert np.abs((full_a - full_b).toarray()).max() <= 1e-10
        assert np.abs(lumped_a - lumped_b).max() <= 1e-10
    assert np.abs((mass_matrix_2(original) - mass_matrix_2(shifted)).toarray()).max() <= 1e-10
