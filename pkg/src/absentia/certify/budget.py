"""Budget inequalities of the absence theorems and their certificates.

Each check turns a set of subordination constants into a verdict. The
budget must stay at or below 1 − strict_margin, and every constant a
theorem requires to be below 1 must be so with the same margin.
"""

from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Optional, Union
import logging
import math

from absentia.config import get_settings
from absentia.errors import AbsentiaError
from absentia.fields.angular import AngularFluxDensity, flux_distance

logger = logging.getLogger(__name__)

ROBUST_WEIGHT = 17.0
EPSILON_FLOOR = 1e-6


class Verdict(str, Enum):
    """Outcome of one certificate."""

    CERTIFIED = "certified"
    NOT_CERTIFIED = "not_certified"
    INAPPLICABLE = "inapplicable"


class TheoremId(str, Enum):
    THM1 = "Thm1"
    THM2_BUDGET = "Thm2_budget"
    THM3_NSA = "Thm3_nsa"
    THM4_ROBUST = "Thm4_robust"
    THM5_AB = "Thm5_AB"


class CertificationError(AbsentiaError, ValueError):
    """Raised when constants cannot be computed or a budget is ill-posed."""

    def __init__(self, message: str, constant: Optional[str] = None):
        self.constant = constant
        where = f" [{constant}]" if constant else ""
        super().__init__(f"{message}{where}")


@dataclass
class Budget:
    """Subordination constants (square roots of the sup quotients).

    ``b5_display`` is the constant of the weight 4r²|ImV| printed next to
    the 4r²|ImV|² condition; the larger of the two enters every budget.
    """

    a1: float = 0.0
    a2: float = 0.0
    b: float = 0.0
    b1: float = 0.0
    b2: float = 0.0
    b3: float = 0.0
    b4: float = 0.0
    b5: float = 0.0
    b5_display: float = 0.0
    b6: float = 0.0
    epsilon: Optional[float] = None
    d: int = 2
    beta: Optional[float] = None
    provenance: dict[str, str] = field(default_factory=dict)
    converged: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "b", "b1", "b2", "b3", "b4", "b5", "b5_display", "b6"):
            value = getattr(self, name)
            if not value >= 0:
                raise CertificationError(f"constants must be non-negative, got {value}", name)

    @property
    def b5_effective(self) -> float:
        return max(self.b5, self.b5_display)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class CertificateReport:
    """Verdict of one theorem on one set of constants."""

    theorem_id: TheoremId
    constants: Budget
    budget_value: float
    verdict: Verdict
    failures: list[str] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return 1.0 - self.budget_value

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    def as_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id.value,
            "constants": self.constants.as_dict(),
            "budget_value": self.budget_value,
            "margin": self.margin,
            "verdict": self.verdict.value,
            "failures": list(self.failures),
            "diagnostics": self.diagnostics,
        }


def _margin(strict_margin: Optional[float]) -> float:
    return get_settings().certify.strict_margin if strict_margin is None else strict_margin


def _conclude(
    theorem: TheoremId,
    budget: Budget,
    value: float,
    required: dict[str, float],
    strict_margin: Optional[float],
    diagnostics: Optional[dict] = None,
) -> CertificateReport:
    """Certified iff value and every required constant are ≤ 1 − margin."""
    bound = 1.0 - _margin(strict_margin)
    failures = [f"{name}={v:.6g} is not below 1" for name, v in required.items() if not v <= bound]
    if not value <= bound:
        failures.append(f"budget {value:.6g} is not below 1")
    verdict = Verdict.NOT_CERTIFIED if failures else Verdict.CERTIFIED
    logger.info(f"{theorem.value}: budget {value:.6g} -> {verdict.value}")
    return CertificateReport(theorem, budget, value, verdict, failures, diagnostics or {})


def _inapplicable(theorem: TheoremId, budget: Budget, reason: str) -> CertificateReport:
    logger.info(f"{theorem.value}: inapplicable ({reason})")
    return CertificateReport(
        theorem, budget, math.nan, Verdict.INAPPLICABLE, [reason], {"reason": reason}
    )


def _core(budget: Budget, d: int = 2) -> float:
    return budget.b1 + budget.b2**2 + (d - 1) * budget.b3**2 + budget.b4


def check_budget_thm1(budget: Budget, strict_margin: Optional[float] = None) -> CertificateReport:
    """b₁ + b₂² + b₃² + b₄ < 1 with b and b₁…b₄ each below 1."""
    required = {"b": budget.b, "b1": budget.b1, "b2": budget.b2, "b3": budget.b3, "b4": budget.b4}
    return _conclude(TheoremId.THM1, budget, _core(budget), required, strict_margin)


def check_budget_multi(
    d: int, budget: Budget, strict_margin: Optional[float] = None
) -> CertificateReport:
    """b₁ + b₂² + (d−1)b₃² + b₄ < 1; for d ≠ 2 the constants are taken as given.

    Raises:
        CertificationError: If d < 1
    """
    if d < 1:
        raise CertificationError(f"dimension must be at least 1, got {d}", "d")
    budget = replace(budget, d=d)
    required = {"b": budget.b, "b1": budget.b1, "b2": budget.b2, "b3": budget.b3, "b4": budget.b4}
    diagnostics = {} if d == 2 else {"note": f"arithmetic only: d={d} constants supplied"}
    return _conclude(
        TheoremId.THM2_BUDGET, budget, _core(budget, d), required, strict_margin, diagnostics
    )


def _nsa_value(budget: Budget) -> float:
    return _core(budget) + budget.b5_effective + budget.b6 * budget.a2


def _nsa_required(budget: Budget) -> dict[str, float]:
    return {
        "a1": budget.a1,
        "a2": budget.a2,
        "b1": budget.b1,
        "b2": budget.b2,
        "b3": budget.b3,
        "b4": budget.b4,
    }


def check_budget_nsa(
    budget: Budget,
    obvious: Optional[bool] = None,
    remark: bool = False,
    strict_margin: Optional[float] = None,
) -> CertificateReport:
    """b₁ + b₂² + b₃² + b₄ + b₅ + b₆a₂ < 1 with a₁, a₂, b₁…b₄ below 1.

    Args:
        budget: Constants, b₅ taken as the larger of its two weights
        obvious: Outcome of check_obvious_condition; False makes the theorem
            inapplicable, None records that it was not checked
        remark: ReV ≥ 1/(4r²) holds pointwise, which drops b₅ and b₆
        strict_margin: Override of the configured margin
    """
    if obvious is False and not remark:
        return _inapplicable(TheoremId.THM3_NSA, budget, "obvious condition fails")
    diagnostics: dict = {"obvious_condition": "unchecked" if obvious is None else "holds"}
    if remark:
        budget = replace(budget, b5=0.0, b5_display=0.0, b6=0.0)
        diagnostics["obvious_condition"] = "pointwise_shortcut"
    if budget.b5_display > budget.b5:
        diagnostics["b5_weight"] = "4r²|ImV| drives the verdict"
    return _conclude(
        TheoremId.THM3_NSA,
        budget,
        _nsa_value(budget),
        _nsa_required(budget),
        strict_margin,
        diagnostics,
    )


def _require_epsilon(epsilon: float) -> None:
    if not 0 < epsilon < 1:
        raise CertificationError(f"epsilon must be in (0, 1), got {epsilon}", "epsilon")


def _clamp_epsilon(epsilon: float) -> float:
    """Keep the minimizer inside (0, 1); a vanishing a₂ leaves ε at the floor."""
    if epsilon <= 0.0:
        return EPSILON_FLOOR
    return min(epsilon, 1.0 - 1e-9)


def robust_penalty(a2: float, epsilon: float) -> float:
    return ROBUST_WEIGHT * a2**2 / epsilon + 4.0 * epsilon


def check_budget_robust(
    budget: Budget, epsilon: Optional[float] = None, strict_margin: Optional[float] = None
) -> CertificateReport:
    """nsa budget + 17a₂²/ε + 4ε < 1, without the obvious condition.

    ε defaults to its minimizer (√17/2)·a₂ clamped into (0, 1), and to
    10⁻⁶ when a₂ = 0.
    """
    if epsilon is None:
        epsilon = _clamp_epsilon(math.sqrt(ROBUST_WEIGHT) / 2.0 * budget.a2)
        chosen = "optimal"
    else:
        _require_epsilon(epsilon)
        chosen = "supplied"
    budget = replace(budget, epsilon=epsilon)
    penalty = robust_penalty(budget.a2, epsilon)
    return _conclude(
        TheoremId.THM4_ROBUST,
        budget,
        _nsa_value(budget) + penalty,
        _nsa_required(budget),
        strict_margin,
        {"epsilon": epsilon, "epsilon_choice": chosen, "penalty": penalty},
    )


def ab_penalty(beta: float, a2: float, epsilon: float) -> float:
    return (0.25 - beta**2) * (epsilon + a2**2 / (beta**2 * epsilon))


def check_budget_ab(
    alpha: Union[AngularFluxDensity, float],
    budget: Budget,
    epsilon: Optional[float] = None,
    strict_margin: Optional[float] = None,
) -> CertificateReport:
    """b₂² + b₃² + b₄ + b₅ + b₆a₂ + (1/4 − β²)(ε + a₂²/(β²ε)) < 1.

    b₁ does not enter: the Aharonov–Bohm field vanishes off the origin.
    ε defaults to a₂/β clamped into (0, 1).

    Args:
        alpha: Angular flux density, or its mean flux
        budget: Constants of the potential against the Aharonov–Bohm form
        epsilon: Fixed ε instead of the minimizer
        strict_margin: Override of the configured margin
    """
    mean = alpha.mean if isinstance(alpha, AngularFluxDensity) else float(alpha)
    beta = flux_distance(mean)
    budget = replace(budget, beta=beta, b1=0.0)
    if beta == 0.0:
        return _inapplicable(
            TheoremId.THM5_AB, budget, f"integer flux {mean:g}: β = 0, no Hardy gain"
        )
    if epsilon is None:
        epsilon = _clamp_epsilon(budget.a2 / beta)
        chosen = "optimal"
    else:
        _require_epsilon(epsilon)
        chosen = "supplied"
    budget = replace(budget, epsilon=epsilon)
    penalty = ab_penalty(beta, budget.a2, epsilon)
    value = (
        budget.b2**2
        + budget.b3**2
        + budget.b4
        + budget.b5_effective
        + budget.b6 * budget.a2
        + penalty
    )
    required = {k: v for k, v in _nsa_required(budget).items() if k != "b1"}
    return _conclude(
        TheoremId.THM5_AB,
        budget,
        value,
        required,
        strict_margin,
        {"beta": beta, "epsilon": epsilon, "epsilon_choice": chosen, "penalty": penalty},
    )
