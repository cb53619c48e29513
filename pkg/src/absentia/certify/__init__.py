"""Absence-of-eigenvalue certificates: constants, budgets and radius sweeps."""

from absentia.certify.budget import (
    Budget,
    CertificateReport,
    CertificationError,
    TheoremId,
    Verdict,
    check_budget_ab,
    check_budget_multi,
    check_budget_nsa,
    check_budget_robust,
    check_budget_thm1,
)
from absentia.certify.constants import (
    ObviousConditionResult,
    ObviousOutcome,
    PointwiseBounds,
    check_obvious_condition,
    constants_nsa,
    constants_thm1,
    pointwise_sufficient,
)
from absentia.certify.sweep import CertificationSweep, certify_scenario, constant_drift

__all__ = [
    "Budget",
    "CertificateReport",
    "CertificationError",
    "CertificationSweep",
    "ObviousConditionResult",
    "ObviousOutcome",
    "PointwiseBounds",
    "TheoremId",
    "Verdict",
    "certify_scenario",
    "check_budget_ab",
    "check_budget_multi",
    "check_budget_nsa",
    "check_budget_robust",
    "check_budget_thm1",
    "check_obvious_condition",
    "constant_drift",
    "constants_nsa",
    "constants_thm1",
    "pointwise_sufficient",
]
