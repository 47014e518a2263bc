from .complex import (
    PointCloud,
    SimplicialComplex2,
    TriangleGeometry,
    build_complex,
    euler_characteristic,
    triangle_geometry,
)
from .validation import ValidationReport, validate_mesh

__all__ = [
    "PointCloud",
    "SimplicialComplex2",
    "TriangleGeometry",
    "ValidationReport",
    "build_complex",
    "euler_characteristic",
    "triangle_geometry",
    "validate_mesh",
]
