"""Stabilization of the lowest eigenvalue as the truncation radius grows."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence
import logging

from absentia.config import get_settings
from absentia.fields.potentials import PotentialModel
from absentia.fields.registry import FieldModel
from absentia.forms.assembly import (
    HermitianForm,
    WeightMass,
    assemble_dirichlet_form,
    hamiltonian_form,
    mass_matrix,
    potential_mass,
)
from absentia.mesh.grid import GridSpec, PolarGrid
from absentia.solvers.eigen import SolverError, SpectralResult, participation_radius, smallest_eigs

logger = logging.getLogger(__name__)


class StabilityVerdict(str, Enum):
    GENUINE = "genuine"
    ARTIFACT = "artifact"


@dataclass(frozen=True)
class SpectralScenario:
    """Field, real potential and grid family of a truncated eigenproblem."""

    field: FieldModel
    potential: PotentialModel
    grid_spec: GridSpec

    def assemble(self, r_max: float) -> tuple[PolarGrid, HermitianForm, WeightMass]:
        if not self.potential.is_real:
            raise SolverError("spectral runs need a real potential")
        grid = self.grid_spec.at_radius(r_max)
        dirichlet = assemble_dirichlet_form(self.field.vector_potential(), grid)
        v_mass = potential_mass(self.potential.re_values, grid)
        return grid, hamiltonian_form(dirichlet, v_mass), mass_matrix(grid)


@dataclass
class StabilizationReport:
    """λ₁ per truncation radius and the resulting verdict.

    ``verdict`` is None when a solve did not converge.
    """

    radii: list[float]
    eigenvalues: list[float]
    participation_radii: list[float]
    tolerance: float
    verdict: Optional[StabilityVerdict]
    results: list[SpectralResult] = field(default_factory=list)
    notice: str = ""

    def as_dict(self) -> dict:
        return {
            "radii": self.radii,
            "lambda_1": self.eigenvalues,
            "participation_radii": self.participation_radii,
            "tol_stab": self.tolerance,
            "verdict": self.verdict.value if self.verdict else None,
            "notice": self.notice,
            "solves": [r.as_dict() for r in self.results],
        }


def stabilization_probe(
    scenario: SpectralScenario,
    radii: Sequence[float],
    k: int = 1,
    seed: Optional[int] = None,
) -> StabilizationReport:
    """Solve for λ₁ on each radius and judge whether it is a bound state.

    A value is genuine when successive λ₁ agree within tol_stab·(1 + |λ₁|)
    and the eigenfunction's participation radius stays within r_max/2.
    Anything else is reported as a truncation artifact.

    At least two radii are required; with only two, a single comparison
    decides the verdict and a warning is logged.

    Raises:
        SolverError: If fewer than two radii are given
    """
    radii = sorted(float(r) for r in radii)
    if len(radii) < 2:
        raise SolverError("stabilization needs at least two radii")
    if len(radii) == 2:
        logger.warning("stabilization over two radii rests on a single comparison")
    tol_rel = get_settings().mesh.tol_stab_rel

    lambdas, spreads, results = [], [], []
    converged = True
    for r_max in radii:
        _, h, m = scenario.assemble(r_max)
        result = smallest_eigs(h, m, k=k, seed=seed)
        results.append(result)
        converged = converged and result.converged and result.eigenvalues.size > 0
        if not result.eigenvalues.size:
            break
        lambdas.append(float(result.eigenvalues[0]))
        spreads.append(participation_radius(result.eigenfunction(0)))
        logger.info(
            f"r_max={r_max:g}: λ₁={lambdas[-1]:.8g}, participation radius {spreads[-1]:.4g}"
        )

    tolerance = tol_rel * (1.0 + abs(lambdas[-1])) if lambdas else float("nan")
    if not converged:
        return StabilizationReport(
            radii, lambdas, spreads, tolerance, None, results,
            notice="verdict withheld: eigen-solve did not converge",
        )

    stable = all(
        abs(b - a) <= tol_rel * (1.0 + abs(a)) for a, b in zip(lambdas, lambdas[1:])
    )
    confined = all(spread <= r / 2.0 for spread, r in zip(spreads, radii))
    verdict = StabilityVerdict.GENUINE if stable and confined else StabilityVerdict.ARTIFACT
    if verdict is StabilityVerdict.GENUINE:
        notice = ""
    elif not stable:
        notice = "λ₁ drifts with r_max"
    else:
        notice = "eigenfunction spreads to the truncation boundary"
    return StabilizationReport(radii, lambdas, spreads, tolerance, verdict, results, notice)
