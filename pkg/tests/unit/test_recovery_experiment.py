from __future__ import annotations

import numpy as np
import pytest

from pc_tsp.errors import ConfigError
from pc_tsp.metrics.whitney import assemble_metrics
from pc_tsp.operators.laplacians import build_l1
from pc_tsp.sampling.experiment import (
    RECOVERY_COLUMNS,
    default_bandwidth,
    parse_range,
    recovery_experiment,
)
from pc_tsp.synthesis import assign_coordinate_colors


@pytest.fixture(scope="module")
def setup(small_torus):
    colors = assign_coordinate_colors(small_torus.points)
    laplacian = build_l1(small_torus, assemble_metrics(small_torus, "lumped"))
    return small_torus, colors, laplacian


@pytest.mark.parametrize(
    ("spec", "expected"),
    [
        ("100:250:50", [100, 150, 200, 250]),
        ("3:5", [3, 4, 5]),
        ("10,20, 40", [10, 20, 40]),
        ("7", [7]),
    ],
)
def test_parse_range(spec: str, expected: list[int]) -> None:
    assert parse_range(spec) == expected


@pytest.mark.parametrize("spec", ["a:b", "1:10:0", "1:2:3:4", "1.5"])
def test_parse_range_rejects_garbage(spec: str) -> None:
    with pytest.raises(ConfigError):
        parse_range(spec)


@pytest.mark.parametrize(("n", "expected"), [(1, 1), (3, 1), (100, 50), (750, 375), (1000, 400)])
def test_default_bandwidth(n: int, expected: int) -> None:
    assert default_bandwidth(n) == expected


def test_records_are_variant_major_and_complete(setup) -> None:
    complex_, colors, laplacian = setup
    records = recovery_experiment(complex_, colors, None, [40, 80], laplacian, max_workers=2)

    assert [(r.variant, r.n_samples) for r in records] == [
        ("full_L1", 40),
        ("full_L1", 80),
        ("down_only", 40),
        ("down_only", 80),
    ]
    for record in records:
        row = record.as_row()
        assert list(row) == RECOVERY_COLUMNS
        assert row["bandwidth"] == record.n_samples // 2
        assert row["sampling"] == "maxdet"
        assert row["mse_mean_sq"] >= 0.0
        assert np.isfinite(row["cond_estimate"])
        assert record.signal is None


def test_full_sampling_recovers_the_signal(setup) -> None:
    complex_, colors, laplacian = setup
    E = complex_.n_edges
    (record,) = recovery_experiment(
        complex_, colors, 10, [E], laplacian, ["full_L1"], keep_signals=True
    )

    assert record.mse_mean_sq == pytest.approx(0.0, abs=1e-20)
    assert record.signal.shape == (E,)


def test_runs_are_deterministic(setup) -> None:
    complex_, colors, laplacian = setup
    kwargs = dict(sampling="random", seed=3, max_workers=3)
    first = recovery_experiment(complex_, colors, 10, [30, 60], laplacian, **kwargs)
    second = recovery_experiment(complex_, colors, 10, [30, 60], laplacian, **kwargs)

    assert [r.as_row() for r in first] == [r.as_row() for r in second]


@pytest.mark.parametrize("grid", [[], [0], [100_000]])
def test_grid_must_fit_the_edge_count(setup, grid) -> None:
    complex_, colors, laplacian = setup
    with pytest.raises(ConfigError):
        recovery_experiment(complex_, colors, None, grid, laplacian)


def test_unknown_sampling_strategy(setup) -> None:
    complex_, colors, laplacian = setup
    with pytest.raises(ConfigError):
        recovery_experiment(complex_, colors, None, [40], laplacian, sampling="greedy")
