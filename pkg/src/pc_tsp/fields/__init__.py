from .maps import (
    color_roundtrip,
    lift_to_vertices,
    project_to_edges,
    reconstruct_vertex_field,
    whitney_reconstruct_barycenter,
)

__all__ = [
    "color_roundtrip",
    "lift_to_vertices",
    "project_to_edges",
    "reconstruct_vertex_field",
    "whitney_reconstruct_barycenter",
]
