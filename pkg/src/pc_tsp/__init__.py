"""Topological signal processing for point clouds modelled as triangle simplicial complexes."""

__version__ = "0.1.0"
