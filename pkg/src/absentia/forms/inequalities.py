"""Pointwise checks of the diamagnetic and magnetic lower-bound inequalities."""

from dataclasses import dataclass
import logging

import numpy as np

from absentia.forms.assembly import HermitianForm, WeightMass
from absentia.mesh.functions import GridFunction

logger = logging.getLogger(__name__)

ROUNDOFF = 1e-12


@dataclass(frozen=True)
class InequalityCheck:
    """Both sides of one inequality evaluated on one test function."""

    name: str
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - ROUNDOFF * (1.0 + abs(self.lhs))

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs


def diamagnetic_check(
    dirichlet_a: HermitianForm, dirichlet_0: HermitianForm, psi: GridFunction
) -> InequalityCheck:
    """K_A[ψ] ≥ K_0[|ψ|] on the same grid."""
    if dirichlet_a.grid is not dirichlet_0.grid:
        raise ValueError("forms must be assembled on the same grid")
    modulus = psi.with_values(np.abs(psi.values))
    check = InequalityCheck(
        name="diamagnetic",
        lhs=dirichlet_a.quadratic(psi),
        rhs=dirichlet_0.quadratic(modulus),
    )
    if not check.holds:
        logger.warning(f"Diamagnetic inequality violated: {check.lhs:.6e} < {check.rhs:.6e}")
    return check


def magnetic_lower_bound_check(
    dirichlet_a: HermitianForm, b_mass: WeightMass, psi: GridFunction, sign: int = 1
) -> InequalityCheck:
    """K_A[ψ] ≥ ±Σ B·quad_weight·|ψ|² for the requested sign.

    ``b_mass`` carries the signed nodal field B, ``sign`` picks the side.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return InequalityCheck(
        name=f"magnetic_lower_bound[{'+' if sign > 0 else '-'}]",
        lhs=dirichlet_a.quadratic(psi),
        rhs=sign * b_mass.total(psi),
    )
