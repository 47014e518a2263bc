from .whitney import (
    MetricMatrices,
    WhitneyBasisEval,
    assemble_metrics,
    eval_whitney_0,
    mass_matrix_0,
    mass_matrix_1,
    mass_matrix_2,
)

__all__ = [
    "MetricMatrices",
    "WhitneyBasisEval",
    "assemble_metrics",
    "eval_whitney_0",
    "mass_matrix_0",
    "mass_matrix_1",
    "mass_matrix_2",
]
