from .colors import assign_coordinate_colors
from .spheroid import make_spheroid
from .torus import TorusSpec, make_torus

__all__ = ["TorusSpec", "assign_coordinate_colors", "make_spheroid", "make_torus"]
