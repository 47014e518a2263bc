"""Invariant report for a triangle mesh, as printed by ``pc-tsp validate``."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from pc_tsp.core.complex import PointCloud, SimplicialComplex2, build_complex
from pc_tsp.errors import MeshValidationError

logger = logging.getLogger("pc_tsp.core.validation")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)
    stats: dict[str, int] | None = None
    error_code: str | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> CheckResult | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "stats": self.stats,
            "checks": [asdict(c) for c in self.checks],
        }


def _edge_triangle_counts(complex_: SimplicialComplex2) -> np.ndarray:
    return np.bincount(complex_.triangle_edges.ravel(), minlength=complex_.n_edges)


def non_manifold_edges(complex_: SimplicialComplex2) -> np.ndarray:
    """Edges shared by more than two triangles."""
    return np.flatnonzero(_edge_triangle_counts(complex_) > 2)


def inconsistent_winding_edges(complex_: SimplicialComplex2) -> np.ndarray:
    """Interior edges whose two triangles traverse them in the same direction."""
    B2 = complex_.B2.tocoo()
    traversal = B2.data.astype(np.int64) * complex_.winding_sign[B2.col]
    total = np.bincount(B2.row, weights=traversal, minlength=complex_.n_edges)
    interior = _edge_triangle_counts(complex_) == 2
    return np.flatnonzero(interior & (total != 0))


def _structural_checks(complex_: SimplicialComplex2) -> list[CheckResult]:
    B1 = complex_.B1.astype(np.int64)
    B2 = complex_.B2.astype(np.int64)
    boundary = B1 @ B2
    checks = [
        CheckResult(
            "boundary_of_boundary",
            boundary.count_nonzero() == 0,
            "" if boundary.count_nonzero() == 0 else f"B1*B2 has {boundary.count_nonzero()} nonzeros",
        )
    ]

    b1_counts = np.asarray(abs(B1).sum(axis=0)).ravel()
    b2_counts = np.asarray(abs(B2).sum(axis=0)).ravel()
    bad_b1 = np.flatnonzero(b1_counts != 2)
    bad_b2 = np.flatnonzero(b2_counts != 3)
    checks.append(
        CheckResult("b1_column_sums", bad_b1.size == 0, f"edge {bad_b1[0]}" if bad_b1.size else "")
    )
    checks.append(
        CheckResult("b2_column_sums", bad_b2.size == 0, f"triangle {bad_b2[0]}" if bad_b2.size else "")
    )

    edges = complex_.edges
    ascending = edges[:, 0] < edges[:, 1]
    increasing = np.ones(len(edges), dtype=bool)
    increasing[1:] = (edges[1:, 0] > edges[:-1, 0]) | (
        (edges[1:, 0] == edges[:-1, 0]) & (edges[1:, 1] > edges[:-1, 1])
    )
    bad_order = np.flatnonzero(~(ascending & increasing))
    checks.append(
        CheckResult(
            "canonical_edge_order",
            bad_order.size == 0,
            f"edge {bad_order[0]} {edges[bad_order[0]].tolist()}" if bad_order.size else "",
        )
    )

    non_manifold = non_manifold_edges(complex_)
    checks.append(
        CheckResult(
            "manifold_edges",
            non_manifold.size == 0,
            f"{non_manifold.size} edge(s) with more than two triangles, first edge "
            f"{int(non_manifold[0])} {edges[non_manifold[0]].tolist()}"
            if non_manifold.size
            else "",
        )
    )
    inconsistent = inconsistent_winding_edges(complex_)
    checks.append(
        CheckResult(
            "consistent_winding",
            inconsistent.size == 0,
            f"{inconsistent.size} interior edge(s) traversed twice in the same direction, first "
            f"edge {int(inconsistent[0])} {edges[inconsistent[0]].tolist()}"
            if inconsistent.size
            else "",
        )
    )
    return checks


def validate_mesh(
    points: PointCloud, triangle_list: Sequence[Sequence[int]] | np.ndarray
) -> tuple[ValidationReport, SimplicialComplex2 | None]:
    """Build the complex and run every structural check; construction errors end the report."""
    report = ValidationReport()
    try:
        complex_ = build_complex(points, triangle_list)
    except MeshValidationError as exc:
        report.checks.append(CheckResult("construction", False, exc.message))
        report.error_code = exc.code
        return report, None

    report.checks.append(CheckResult("construction", True))
    report.checks.extend(_structural_checks(complex_))
    report.stats = complex_.stats()
    failure = report.first_failure
    if failure is not None:
        logger.warning("Mesh check %s failed: %s", failure.name, failure.detail)
    return report, complex_
