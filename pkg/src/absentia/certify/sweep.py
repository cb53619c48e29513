"""Certificates over a nested family of truncation radii.

Truncation shrinks the class of test functions, so a constant computed on
a disk can only understate its whole-plane value. A certificate is kept
only when no constant moved by more than the drift tolerance over the
last step of the sweep.
"""

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence
import logging
import math

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
    check_obvious_condition,
    constants_nsa,
    constants_thm1,
    pointwise_sufficient,
)
from absentia.config import get_settings
from absentia.fields.potentials import PotentialModel
from absentia.fields.registry import FieldModel
from absentia.mesh.grid import GridSpec, PolarGrid

logger = logging.getLogger(__name__)

Route = Literal["variational", "pointwise"]
DRIFT_KEYS = ("a1", "a2", "b", "b1", "b2", "b3", "b4", "b5", "b5_display", "b6")


@dataclass
class SweepStep:
    """Constants and certificate at one truncation radius."""

    r_max: float
    grid: dict
    report: CertificateReport
    obvious: Optional[ObviousConditionResult] = None

    def as_dict(self) -> dict:
        out = {"r_max": self.r_max, "grid": self.grid, "certificate": self.report.as_dict()}
        if self.obvious is not None:
            out["obvious_condition"] = self.obvious.as_dict()
        return out


@dataclass
class CertificationSweep:
    """Per-radius certificates and the final, drift-checked certificate."""

    theorem_id: TheoremId
    steps: list[SweepStep] = field(default_factory=list)
    final: Optional[CertificateReport] = None

    @property
    def radii(self) -> list[float]:
        return [s.r_max for s in self.steps]

    def as_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id.value,
            "radii": self.radii,
            "steps": [s.as_dict() for s in self.steps],
            "final": self.final.as_dict() if self.final else None,
        }


def constant_drift(previous: Budget, current: Budget) -> dict[str, float]:
    """Relative change of every constant between two radii (0 when both vanish)."""
    drift = {}
    for key in DRIFT_KEYS:
        a, b = getattr(previous, key), getattr(current, key)
        if a == b:
            drift[key] = 0.0
        elif a == 0 or math.isinf(a) or math.isinf(b):
            drift[key] = math.inf
        else:
            drift[key] = abs(b - a) / abs(a)
    return drift


def _certify_once(
    theorem: TheoremId,
    field_model: FieldModel,
    potential: PotentialModel,
    grid: PolarGrid,
    route: Route,
    epsilon: Optional[float],
    d: int,
    seed: Optional[int],
) -> tuple[CertificateReport, Optional[ObviousConditionResult]]:
    if route == "pointwise":
        if theorem not in (TheoremId.THM1, TheoremId.THM2_BUDGET):
            raise CertificationError(
                f"pointwise route covers Thm1 only, got {theorem.value}", "route"
            )
        bounds = pointwise_sufficient(field_model, potential, grid)
        if not bounds.applicable:
            reason = "pointwise route: a weight is positive where ±B ≤ 0"
            return _inapplicable(theorem, reason), None
        if theorem is TheoremId.THM2_BUDGET:
            report = check_budget_multi(d, bounds.budget())
        else:
            report = check_budget_thm1(bounds.budget())
        report.diagnostics["pointwise"] = bounds.as_dict()
        return report, None

    if theorem in (TheoremId.THM1, TheoremId.THM2_BUDGET):
        budget = constants_thm1(field_model, potential, grid, seed=seed)
        if theorem is TheoremId.THM1:
            return check_budget_thm1(budget), None
        return check_budget_multi(d, budget), None

    budget = constants_nsa(field_model, potential, grid, seed=seed)
    if theorem is TheoremId.THM3_NSA:
        obvious = check_obvious_condition(field_model, potential, grid, seed=seed)
        report = check_budget_nsa(
            budget,
            obvious=obvious.holds,
            remark=obvious.outcome is ObviousOutcome.POINTWISE_SHORTCUT,
        )
        return report, obvious
    if theorem is TheoremId.THM4_ROBUST:
        return check_budget_robust(budget, epsilon), None
    if not field_model.is_ab:
        return _inapplicable(theorem, "Thm5_AB needs an Aharonov–Bohm field"), None
    return check_budget_ab(field_model.alpha, budget, epsilon), None  # type: ignore[arg-type]


def _inapplicable(theorem: TheoremId, reason: str) -> CertificateReport:
    return CertificateReport(
        theorem, Budget(), math.nan, Verdict.INAPPLICABLE, [reason], {"reason": reason}
    )


def _apply_drift_rule(
    final: CertificateReport, previous: CertificateReport, radius_ratio: float
) -> CertificateReport:
    """Withhold a certificate whose constants moved by more than the tolerance.

    The drift is measured over the last step of the sweep, whatever its
    radius ratio; the ratio is recorded next to it.
    """
    settings = get_settings().certify
    drift = constant_drift(previous.constants, final.constants)
    worst = max(drift.values())
    final.diagnostics["drift"] = drift
    final.diagnostics["max_drift"] = worst
    final.diagnostics["drift_radius_ratio"] = radius_ratio
    if radius_ratio < 2.0:
        logger.warning(
            f"{final.theorem_id.value}: last sweep step spans a radius ratio of "
            f"{radius_ratio:.3g}, less than a doubling"
        )
    if final.verdict is Verdict.CERTIFIED and worst > settings.drift_tolerance:
        final.verdict = Verdict.NOT_CERTIFIED
        final.failures.append(
            f"r_max drift {worst:.3g} exceeds {settings.drift_tolerance:g} over the last step"
        )
        logger.warning(
            f"{final.theorem_id.value}: certificate withheld, constants drift {worst:.3g}"
        )
    return final


def certify_scenario(
    field_model: FieldModel,
    potential: PotentialModel,
    grid_spec: GridSpec,
    theorem: TheoremId = TheoremId.THM1,
    radii: Optional[Sequence[float]] = None,
    route: Route = "variational",
    epsilon: Optional[float] = None,
    d: int = 2,
    seed: Optional[int] = None,
) -> CertificationSweep:
    """Certify on the nested grids grid_spec.at_radius(R) for every R.

    Args:
        field_model: Magnetic field (radial or Aharonov–Bohm)
        potential: Potential with a decided decomposition
        grid_spec: Base grid family
        theorem: Theorem whose budget is checked
        radii: Truncation radii; the base grid radius alone by default
        route: Variational constants, or pointwise bounds (Thm1 only)
        epsilon: Fixed ε for the robust and Aharonov–Bohm budgets
        d: Dimension of the Theorem 2 budget
        seed: Start-vector seed

    Returns:
        CertificationSweep whose ``final`` carries the drift diagnostics.
        A single radius cannot show stability, so it never certifies.
    """
    radii = sorted(float(r) for r in (radii or [grid_spec.r_max]))
    sweep = CertificationSweep(theorem_id=theorem)
    for r_max in radii:
        grid = grid_spec.at_radius(r_max)
        try:
            report, obvious = _certify_once(
                theorem, field_model, potential, grid, route, epsilon, d, seed
            )
        except CertificationError as e:
            report, obvious = _inapplicable(theorem, str(e)), None
        report.diagnostics["grid"] = grid.describe()
        sweep.steps.append(SweepStep(r_max, grid.describe(), report, obvious))
        logger.info(f"{theorem.value} at r_max={r_max:g}: {report.verdict.value}")
        if report.verdict is Verdict.INAPPLICABLE:
            break

    final = sweep.steps[-1].report
    if final.verdict is not Verdict.INAPPLICABLE:
        if len(sweep.steps) >= 2:
            previous = sweep.steps[-2]
            ratio = sweep.steps[-1].r_max / previous.r_max
            final = _apply_drift_rule(final, previous.report, ratio)
        elif final.verdict is Verdict.CERTIFIED:
            final.verdict = Verdict.NOT_CERTIFIED
            final.failures.append("drift unchecked: certification needs at least two radii")
    final.diagnostics["sweep_radii"] = sweep.radii
    final.diagnostics["sweep_budgets"] = [s.report.budget_value for s in sweep.steps]
    sweep.final = final
    return sweep
