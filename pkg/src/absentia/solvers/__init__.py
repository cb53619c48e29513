"""Eigensolvers and Rayleigh-quotient extrema."""

from absentia.solvers.eigen import (
    FactorizationError,
    InvalidPencilError,
    QuotientMinimum,
    SolverError,
    SpectralResult,
    SubordinationConstant,
    min_rayleigh,
    participation_radius,
    smallest_eigs,
    sup_rayleigh,
)
from absentia.solvers.stability import (
    SpectralScenario,
    StabilityVerdict,
    StabilizationReport,
    stabilization_probe,
)

__all__ = [
    "FactorizationError",
    "InvalidPencilError",
    "QuotientMinimum",
    "SolverError",
    "SpectralResult",
    "SpectralScenario",
    "StabilityVerdict",
    "StabilizationReport",
    "SubordinationConstant",
    "min_rayleigh",
    "participation_radius",
    "smallest_eigs",
    "stabilization_probe",
    "sup_rayleigh",
]
