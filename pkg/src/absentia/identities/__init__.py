"""Manufactured eigenpairs and multiplier-identity residuals."""

from absentia.identities.manufactured import (
    Decomposition,
    GaussianMode,
    ManufacturedEigenpair,
    ManufactureError,
    SplitSpec,
    manufacture,
)
from absentia.identities.residuals import (
    IdentityError,
    IdentityResidualEntry,
    IdentityResidualReport,
    RadialMultiplier,
    complex_lambda_terms,
    discrete_residual,
    phase_shift,
    refinement_order,
    residual_crucial_ss,
    residual_G1,
    residual_G2,
    residual_G3,
)

__all__ = [
    "Decomposition",
    "GaussianMode",
    "IdentityError",
    "IdentityResidualEntry",
    "IdentityResidualReport",
    "ManufactureError",
    "ManufacturedEigenpair",
    "RadialMultiplier",
    "SplitSpec",
    "complex_lambda_terms",
    "discrete_residual",
    "manufacture",
    "phase_shift",
    "refinement_order",
    "residual_G1",
    "residual_G2",
    "residual_G3",
    "residual_crucial_ss",
]
