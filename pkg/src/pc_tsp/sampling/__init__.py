from .experiment import RecoveryRecord, recovery_experiment
from .maxdet import BandlimitedModel, SamplingSet, bandlimited_model, maxdet_select, random_select
from .recovery import RecoveryResult, recover, recover_with_diagnostics, sample

__all__ = [
    "BandlimitedModel",
    "RecoveryRecord",
    "RecoveryResult",
    "SamplingSet",
    "bandlimited_model",
    "maxdet_select",
    "random_select",
    "recover",
    "recover_with_diagnostics",
    "recovery_experiment",
    "sample",
]
