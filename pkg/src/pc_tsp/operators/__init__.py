from .laplacians import HodgeLaplacian1, HodgeLaplacian2, LaplacianVariant, build_l1, build_l2
from .spectral import SpectralBasis, isft, sft, spectral_basis

__all__ = [
    "HodgeLaplacian1",
    "HodgeLaplacian2",
    "LaplacianVariant",
    "SpectralBasis",
    "build_l1",
    "build_l2",
    "isft",
    "sft",
    "spectral_basis",
]
