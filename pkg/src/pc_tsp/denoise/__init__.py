from .experiment import SnrRecord, snr_experiment, summarize_snr
from .normals import NormalDenoiseResult, add_normal_noise, denoise_normals
from .solver import DataTerm, DenoiseProblem, DenoiseSolution, denoise

__all__ = [
    "DataTerm",
    "DenoiseProblem",
    "DenoiseSolution",
    "NormalDenoiseResult",
    "SnrRecord",
    "add_normal_noise",
    "denoise",
    "denoise_normals",
    "snr_experiment",
    "summarize_snr",
]
