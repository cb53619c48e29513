"""Hardy-type inequality probes."""

from absentia.hardy.circle import CircleSpectrum, circle_eigenvalue, circle_spectrum
from absentia.hardy.probes import (
    HardyProbeResult,
    InequalityId,
    ProbeRejected,
    ProbeSweep,
    ab_probe,
    ab_weighted_probe,
    ck_probe,
    circle_probe,
    hp_disk_probe,
    lw_probe,
    sweep_probe,
    weighted_classical_probe,
)

__all__ = [
    "CircleSpectrum",
    "HardyProbeResult",
    "InequalityId",
    "ProbeRejected",
    "ProbeSweep",
    "ab_probe",
    "ab_weighted_probe",
    "circle_eigenvalue",
    "circle_spectrum",
    "ck_probe",
    "circle_probe",
    "hp_disk_probe",
    "lw_probe",
    "sweep_probe",
    "weighted_classical_probe",
]
