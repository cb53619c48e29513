"""Subordination constants of the absence theorems.

Each constant is b_X = √c_X with c_X = sup ∫W_X|ψ|² / ∫|∇_Aψ|², computed
by sup_rayleigh against the magnetic Dirichlet form of the field. The
pointwise route bounds the same quotients by sup W_X/(±B).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional
import logging
import math

import numpy as np

from absentia.certify.budget import Budget, CertificationError
from absentia.config import get_settings
from absentia.fields.potentials import PotentialModel
from absentia.fields.registry import FieldModel
from absentia.forms.assembly import (
    HermitianForm,
    assemble_dirichlet_form,
    assemble_weight,
    hamiltonian_form,
)
from absentia.mesh.grid import PolarGrid
from absentia.solvers.eigen import SolverError, SubordinationConstant, sup_rayleigh

logger = logging.getLogger(__name__)

RadialFn = Callable[[np.ndarray], np.ndarray]


def constant_weights(
    field_model: FieldModel, potential: PotentialModel, complex_terms: bool = False
) -> dict[str, RadialFn]:
    """Radial weights W_X keyed by the constant they define."""

    def b1(r: np.ndarray) -> np.ndarray:
        return 4.0 * r**2 * field_model.magnetic_field(r) ** 2

    weights: dict[str, RadialFn] = {
        "b": potential.v_minus,
        "b1": b1,
        "b2": potential.d_rv1_plus,
        "b3": lambda r: np.abs(potential.v2_values(r)),
        "b4": lambda r: 4.0 * potential.r2_v2_sq(r),
    }
    if complex_terms:
        weights.update(
            {
                "a1": potential.v_minus,
                "a2": lambda r: np.abs(potential.im_values(r)),
                "b5": lambda r: 4.0 * potential.r2_im_sq(r),
                "b5_display": lambda r: 4.0 * np.asarray(r) ** 2 * np.abs(potential.im_values(r)),
                "b6": potential.r2_re_minus_sq,
            }
        )
    return weights


def _solve_all(
    weights: dict[str, RadialFn],
    k: HermitianForm,
    grid: PolarGrid,
    max_workers: Optional[int],
    seed: Optional[int],
) -> dict[str, Optional[SubordinationConstant]]:
    """Run the independent sup solves; a failed solve maps to None."""
    workers = get_settings().certify.max_workers if max_workers is None else max_workers

    def solve(item: tuple[str, RadialFn]) -> tuple[str, Optional[SubordinationConstant]]:
        name, fn = item
        w = assemble_weight(lambda r, theta: fn(r), grid, label=name)
        try:
            return name, sup_rayleigh(w, k, seed=seed)
        except SolverError as e:
            logger.warning(f"Constant {name} failed: {e}")
            return name, None

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return dict(pool.map(solve, weights.items()))


def _budget(solved: dict[str, Optional[SubordinationConstant]]) -> Budget:
    values, provenance, converged = {}, {}, {}
    for name, result in solved.items():
        if result is None:
            values[name] = math.inf
            provenance[name] = "failed"
            converged[name] = False
        else:
            values[name] = result.b_value
            provenance[name] = f"variational:{result.method}"
            converged[name] = result.converged
    return Budget(**values, provenance=provenance, converged=converged)


def _check_potential(potential: PotentialModel, allow_complex: bool) -> None:
    if not potential.is_decided:
        raise CertificationError(
            "potential has undecided terms; supply a decomposition V = V1 + V2", "decomposition"
        )
    if not allow_complex and not potential.is_real:
        raise CertificationError("Theorem 1 constants need a real potential", "potential")


def constants_thm1(
    field_model: FieldModel,
    potential: PotentialModel,
    grid: PolarGrid,
    max_workers: Optional[int] = None,
    seed: Optional[int] = None,
) -> Budget:
    """b, b₁…b₄ of a real potential against the transverse-gauge form.

    Args:
        field_model: Radial magnetic field
        potential: Real potential with a decided V⁽¹⁾/V⁽²⁾ split
        grid: Polar grid
        max_workers: Concurrent solves, from settings by default
        seed: Start-vector seed of the Lanczos solves

    Returns:
        Budget with per-constant provenance and convergence flags

    Raises:
        CertificationError: For complex V, a missing decomposition, or an
            Aharonov–Bohm field
    """
    _check_potential(potential, allow_complex=False)
    if field_model.is_ab:
        raise CertificationError("Theorem 1 needs a locally bounded field; use Thm5_AB", "field")
    logger.info(f"Computing Theorem 1 constants on {grid.describe()}")
    k = assemble_dirichlet_form(field_model.vector_potential(), grid)
    solved = _solve_all(constant_weights(field_model, potential), k, grid, max_workers, seed)
    return _budget(solved)


def constants_nsa(
    field_model: FieldModel,
    potential: PotentialModel,
    grid: PolarGrid,
    max_workers: Optional[int] = None,
    seed: Optional[int] = None,
) -> Budget:
    """Theorem 1 constants plus a₁, a₂, b₅ (both weights) and b₆; ImV allowed.

    For an Aharonov–Bohm field the form is the Aharonov–Bohm one and b₁ = 0.
    """
    _check_potential(potential, allow_complex=True)
    logger.info(f"Computing non-self-adjoint constants on {grid.describe()}")
    k = assemble_dirichlet_form(field_model.vector_potential(), grid)
    weights = constant_weights(field_model, potential, complex_terms=True)
    del weights["a1"]
    if field_model.is_ab:
        del weights["b1"]
    solved = _solve_all(weights, k, grid, max_workers, seed)
    solved["a1"] = solved["b"]
    budget = _budget(solved)
    if field_model.is_ab:
        budget.provenance["b1"] = "absent: field vanishes off the origin"
    return budget


class ObviousOutcome(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    POINTWISE_SHORTCUT = "pointwise_shortcut"


@dataclass
class ObviousConditionResult:
    """Outcome of the 1/(2r) subordination to ∫r|∇_Aψ|² + ∫r ReV₊|ψ|²."""

    outcome: ObviousOutcome
    value: Optional[float] = None
    converged: bool = True
    notice: str = ""

    @property
    def holds(self) -> bool:
        return self.outcome is not ObviousOutcome.FAILS

    def as_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "value": self.value,
            "converged": self.converged,
            "notice": self.notice,
        }


def check_obvious_condition(
    field_model: FieldModel,
    potential: PotentialModel,
    grid: PolarGrid,
    seed: Optional[int] = None,
) -> ObviousConditionResult:
    """Pointwise shortcut when ReV₊ ≥ 1/(4r²) at every unknown, else the variational check.

    The origin node, where 1/(4r²) is infinite, rules the shortcut out on
    full-disk grids.
    """
    nodes = grid.unknowns
    r = grid.node_r[nodes]
    re_plus = potential.v_plus(r)
    with np.errstate(divide="ignore"):
        threshold = np.where(r > 0, 1.0 / (4.0 * np.where(r > 0, r, 1.0) ** 2), np.inf)
    if np.all(re_plus >= threshold):
        notice = "truncated domain: ReV ≥ 1/(4r²) is not integrable on the whole plane"
        logger.info(f"Obvious condition: pointwise shortcut ({notice})")
        return ObviousConditionResult(ObviousOutcome.POINTWISE_SHORTCUT, notice=notice)

    k = assemble_dirichlet_form(field_model.vector_potential(), grid, radial_weight=lambda s: s)
    v_mass = assemble_weight(
        lambda s, theta: s * potential.v_plus(s), grid, label="r·ReV+"
    )
    form = hamiltonian_form(k, v_mass)
    w = assemble_weight(lambda s: 1.0 / (2.0 * s), grid, rule="cell", label="1/(2r)")
    sup = sup_rayleigh(w, form, seed=seed)
    outcome = ObviousOutcome.HOLDS if sup.value <= 1.0 else ObviousOutcome.FAILS
    logger.info(f"Obvious condition: sup quotient {sup.value:.6g} -> {outcome.value}")
    return ObviousConditionResult(outcome, sup.value, sup.converged)


@dataclass
class PointwiseBounds:
    """Upper bounds sup W_X/(sB) of the squared constants for the best sign s."""

    sign: Optional[int]
    squared: dict[str, float] = field(default_factory=dict)
    by_sign: dict[int, dict[str, float]] = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return self.sign is not None

    def budget(self) -> Budget:
        values = {name: math.sqrt(v) for name, v in self.squared.items()}
        return Budget(**values, provenance={name: "pointwise" for name in values})

    def as_dict(self) -> dict:
        return {
            "sign": self.sign,
            "squared": self.squared,
            "by_sign": {str(s): v for s, v in self.by_sign.items()},
        }


def _ratio_sup(numerator: np.ndarray, signed_field: np.ndarray) -> float:
    active = numerator > 0
    if not np.any(active):
        return 0.0
    if np.any(signed_field[active] <= 0):
        return math.inf
    return float(np.max(numerator[active] / signed_field[active]))


def pointwise_sufficient(
    field_model: FieldModel, potential: PotentialModel, grid: PolarGrid
) -> PointwiseBounds:
    """Bound b², b₁²…b₄² by nodal sups of W_X/(±B) and keep the better sign.

    A constant is infinite for a sign when its weight is positive where ±B ≤ 0;
    if both signs leave an infinite constant the route is inapplicable.
    """
    _check_potential(potential, allow_complex=False)
    r = grid.node_r[grid.unknowns]
    b_values = field_model.magnetic_field(r)
    numerators = {name: fn(r) for name, fn in constant_weights(field_model, potential).items()}

    by_sign = {
        sign: {name: _ratio_sup(n, sign * b_values) for name, n in numerators.items()}
        for sign in (1, -1)
    }
    worst = {sign: max(bounds.values()) for sign, bounds in by_sign.items()}
    sign = min(worst, key=lambda s: worst[s])
    if math.isinf(worst[sign]):
        logger.info("Pointwise route inapplicable: a weight is positive where the field is not")
        return PointwiseBounds(None, {}, by_sign)
    logger.info(f"Pointwise route: sign {sign:+d}, bounds {by_sign[sign]}")
    return PointwiseBounds(sign, by_sign[sign], by_sign)
