from __future__ import annotations

import numpy as np
import pytest

from pc_tsp.core.complex import PointCloud, build_complex, triangle_geometry
from pc_tsp.denoise.experiment import (
    SNR_COLUMNS,
    SUMMARY_COLUMNS,
    SnrRecord,
    snr_experiment,
    summarize_snr,
)
from pc_tsp.denoise.normals import (
    add_normal_noise,
    denoise_normals,
    laplacian_for,
    noise_variance,
    normal_mse,
)
from pc_tsp.errors import ConfigError, DimensionMismatchError
from pc_tsp.synthesis import TorusSpec, make_torus


@pytest.fixture(scope="module")
def torus_setup(small_torus):
    return small_torus, triangle_geometry(small_torus).normals, laplacian_for(small_torus)


def test_noise_variance_follows_the_snr() -> None:
    normals = np.tile([0.0, 0.0, 1.0], (10, 1))
    assert noise_variance(normals, 0.0) == pytest.approx(1 / 3)
    assert noise_variance(normals, 10.0) == pytest.approx(1 / 30)
    with pytest.raises(ConfigError):
        noise_variance(normals, float("inf"))


def test_noise_is_reproducible_and_scaled(torus_setup) -> None:
    _, clean, _ = torus_setup
    first = add_normal_noise(clean, 20.0, np.random.default_rng([0, 1, 2]))
    second = add_normal_noise(clean, 20.0, np.random.default_rng([0, 1, 2]))

    assert np.array_equal(first, second)
    assert not np.array_equal(first, add_normal_noise(clean, 20.0, 1))
    assert np.var(first - clean) == pytest.approx(noise_variance(clean, 20.0), rel=0.3)


def test_normal_mse() -> None:
    clean = np.tile([1.0, 0.0, 0.0], (4, 1))
    estimate = np.tile([0.0, 1.0, 0.0], (4, 1))
    assert normal_mse(clean, clean) == 0.0
    assert normal_mse(estimate, clean) == pytest.approx(2.0)


def test_denoised_normals_are_unit_and_closer_than_the_noise(torus_setup) -> None:
    complex_, clean, laplacian = torus_setup
    noisy = add_normal_noise(clean, 5.0, np.random.default_rng(4))
    result = denoise_normals(complex_, noisy, 0.02, 0.0, laplacian=laplacian)

    assert result.converged
    assert result.zero_triangles.size == 0
    assert np.allclose(np.linalg.norm(result.normals, axis=1), 1.0)
    assert normal_mse(result.normals, clean) < normal_mse(noisy, clean)


def _in_source_order(complex_, per_triangle: np.ndarray) -> np.ndarray:
    out = np.empty_like(per_triangle)
    out[complex_.source_index] = per_triangle
    return out


def test_denoised_normals_do_not_depend_on_vertex_labels() -> None:
    points, triangles = make_torus(TorusSpec(u_steps=8, v_steps=6))
    relabel = np.random.default_rng(11).permutation(points.n_points)
    positions = np.empty_like(points.positions)
    positions[relabel] = points.positions
    original = build_complex(points, triangles)
    relabelled = build_complex(PointCloud(positions=positions), relabel[triangles])
    # relabelling changes the sorted orientation of many triangles
    assert not np.array_equal(
        _in_source_order(original, original.winding_sign),
        _in_source_order(relabelled, relabelled.winding_sign),
    )

    clean = _in_source_order(original, triangle_geometry(original).normals)
    noisy = add_normal_noise(clean, 10.0, np.random.default_rng(3))
    outputs = []
    for complex_ in (original, relabelled):
        result = denoise_normals(complex_, noisy[complex_.source_index], 0.1, 0.05)
        assert result.converged
        outputs.append(_in_source_order(complex_, result.normals))

    assert np.allclose(outputs[0], outputs[1], atol=1e-4)


def test_strong_sparsity_shrinks_to_zero_normals(torus_setup, caplog) -> None:
    complex_, clean, laplacian = torus_setup
    result = denoise_normals(complex_, clean, 0.0, 10.0, laplacian=laplacian)

    assert result.zero_triangles.size == complex_.n_triangles
    assert np.all(result.normals == 0.0)
    assert "zero normal" in caplog.text


def test_normals_shape_is_checked(torus_setup) -> None:
    complex_, clean, laplacian = torus_setup
    with pytest.raises(DimensionMismatchError):
        denoise_normals(complex_, clean[:-1], 0.1, 0.1, laplacian=laplacian)


def test_snr_sweep_layout_and_shared_noise(torus_setup) -> None:
    complex_, clean, laplacian = torus_setup
    records = snr_experiment(
        complex_, [0.0, 20.0], [0.0, 0.1], [0.0], 2, 7, laplacian, max_workers=3
    )

    assert [(r.snr_db, r.lam, r.trial) for r in records] == [
        (0.0, 0.0, 0),
        (0.0, 0.0, 1),
        (0.0, 0.1, 0),
        (0.0, 0.1, 1),
        (20.0, 0.0, 0),
        (20.0, 0.0, 1),
        (20.0, 0.1, 0),
        (20.0, 0.1, 1),
    ]
    # Every (lambda, gamma) pair of a cell sees the same noise draw
    assert records[0].noisy_mse == records[2].noisy_mse
    assert records[1].noisy_mse == records[3].noisy_mse
    assert records[0].noisy_mse != records[1].noisy_mse
    assert list(records[0].as_row()) == SNR_COLUMNS


def test_snr_sweep_is_deterministic(torus_setup) -> None:
    complex_, _, laplacian = torus_setup
    args = (complex_, [10.0], [0.1], [0.05], 3, 0, laplacian)

    first = snr_experiment(*args, max_workers=1)
    second = snr_experiment(*args, max_workers=4)
    assert first == second


@pytest.mark.parametrize(
    ("grids", "trials"),
    [
        (([], [0.1], [0.1]), 1),
        (([0.0], [], [0.1]), 1),
        (([0.0], [0.1], [-1.0]), 1),
        (([0.0], [0.1], [0.1]), 0),
    ],
)
def test_snr_sweep_rejects_bad_grids(torus_setup, grids, trials) -> None:
    complex_, _, laplacian = torus_setup
    with pytest.raises(ConfigError):
        snr_experiment(complex_, *grids, trials, 0, laplacian)


def test_summary_groups_trials() -> None:
    records = [
        SnrRecord(0.0, 0.1, 0.0, trial, mse, 10, True, 1.0)
        for trial, mse in enumerate([1.0, 3.0])
    ] + [SnrRecord(5.0, 0.1, 0.0, 0, 0.5, 10, True, 0.25)]
    summary = summarize_snr(records)

    assert [list(row) for row in summary] == [SUMMARY_COLUMNS, SUMMARY_COLUMNS]
    assert summary[0]["trials"] == 2
    assert summary[0]["mse_mean"] == pytest.approx(2.0)
    assert summary[0]["mse_std"] == pytest.approx(1.0)
    assert summary[1]["noisy_mse_mean"] == pytest.approx(0.25)
