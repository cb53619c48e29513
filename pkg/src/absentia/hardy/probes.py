"""Discrete probes of magnetic and classical Hardy-type inequalities.

Every probe computes the sharp discrete constant inf K[ψ]/∫w|ψ|² on a
grid and compares it with the continuum reference. Truncation can only
raise the constant on a bounded domain, so probes report the bias
direction along with the verdict.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Literal, Optional, Sequence
import logging
import math

import numpy as np

from absentia.config import get_settings
from absentia.errors import AbsentiaError
from absentia.fields.angular import AngularFluxDensity
from absentia.fields.gauges import ab_potential, transverse_gauge, zero_potential
from absentia.fields.profiles import RadialFieldProfile, flux_profile
from absentia.forms.assembly import assemble_dirichlet_form, assemble_weight
from absentia.hardy.circle import circle_spectrum
from absentia.mesh.grid import PolarGrid, build_grid
from absentia.solvers.eigen import QuotientMinimum, min_rayleigh

logger = logging.getLogger(__name__)

LOG_CLAMP = 1e-8
TRUNCATION_BIAS = "upward: Dirichlet truncation can only raise the constant"

CkWeight = Literal["plain_weight", "log_weight"]


class ProbeRejected(AbsentiaError, ValueError):
    """Raised when a probe's hypotheses fail for the given input."""


class InequalityId(str, Enum):
    LW = "LW"
    CK = "CK"
    TILDE_CK = "tilde_CK"
    WEIGHTED_CLASSICAL = "weighted_classical"
    HP_DISK = "HP_disk"
    AB = "AB"
    AB_WEIGHTED = "AB_weighted"
    CIRCLE = "circle"


@dataclass
class HardyProbeResult:
    """Discrete constant of one inequality against its continuum reference."""

    inequality_id: InequalityId
    computed_constant: float
    reference_bound: float
    grid_params: dict
    tol_mesh: float
    converged: bool = True
    skipped: bool = False
    notice: str = ""
    bias: str = TRUNCATION_BIAS

    @property
    def satisfied(self) -> bool:
        if self.skipped:
            return True
        return self.computed_constant >= self.reference_bound * (1.0 - self.tol_mesh)

    def as_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id.value,
            "computed_constant": self.computed_constant,
            "reference_bound": self.reference_bound,
            "satisfied": self.satisfied,
            "grid": self.grid_params,
            "tol_mesh": self.tol_mesh,
            "converged": self.converged,
            "skipped": self.skipped,
            "notice": self.notice,
            "bias": self.bias,
        }


def _result(
    inequality: InequalityId,
    minimum: QuotientMinimum,
    reference: float,
    grid: PolarGrid,
    tol_mesh: Optional[float],
    notice: str = "",
) -> HardyProbeResult:
    tol = get_settings().mesh.tol_mesh if tol_mesh is None else tol_mesh
    result = HardyProbeResult(
        inequality_id=inequality,
        computed_constant=minimum.value,
        reference_bound=reference,
        grid_params=grid.describe(),
        tol_mesh=tol,
        converged=minimum.converged,
        notice=notice,
    )
    logger.info(
        f"{inequality.value}: constant {minimum.value:.6g} vs reference {reference:.6g} "
        f"({'satisfied' if result.satisfied else 'violated'})"
    )
    return result


def _skipped(inequality: InequalityId, grid: PolarGrid, notice: str) -> HardyProbeResult:
    logger.info(f"{inequality.value}: skipped ({notice})")
    return HardyProbeResult(
        inequality_id=inequality,
        computed_constant=math.inf,
        reference_bound=0.0,
        grid_params=grid.describe(),
        tol_mesh=get_settings().mesh.tol_mesh,
        skipped=True,
        notice=notice,
    )


def lw_probe(
    field: RadialFieldProfile, grid: PolarGrid, tol_mesh: Optional[float] = None
) -> HardyProbeResult:
    """K_A[ψ] ≥ c ∫ dist(Φ_B(r), ℤ)²/r² |ψ|²; the reference constant is 1."""
    flux = flux_profile(field)

    def weight(r: np.ndarray, theta: np.ndarray) -> np.ndarray:
        phi = flux(r)
        d = np.abs(phi - np.round(phi))
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r > 0, (d / np.where(r > 0, r, 1.0)) ** 2, 0.0)

    w = assemble_weight(weight, grid, label="dist(Φ,Z)²/r²")
    if w.is_zero:
        return _skipped(InequalityId.LW, grid, "flux distance vanishes on the grid")
    k = assemble_dirichlet_form(transverse_gauge(field), grid)
    return _result(InequalityId.LW, min_rayleigh(k, w), 1.0, grid, tol_mesh)


def ck_weight(choice: CkWeight) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """1/(1 + r²) or 1/(1 + r² log² r), with r clamped away from 0 in the log."""
    if choice == "plain_weight":
        return lambda r, theta: 1.0 / (1.0 + r**2)
    if choice == "log_weight":
        return lambda r, theta: 1.0 / (1.0 + r**2 * np.log(np.maximum(r, LOG_CLAMP)) ** 2)
    raise ProbeRejected(f"Unknown weight choice: {choice}")


def ck_probe(
    field: RadialFieldProfile,
    grid: PolarGrid,
    weight_choice: CkWeight = "log_weight",
    tol_mesh: Optional[float] = None,
) -> HardyProbeResult:
    """Positivity probe of K_A[ψ] ≥ c ∫ |ψ|²/(1 + r² log² r).

    The discrete constant is positive on every bounded grid; what matters
    is how it behaves as the grid grows (see sweep_probe).
    """
    inequality = (
        InequalityId.CK
        if weight_choice == "log_weight"
        else InequalityId.TILDE_CK
    )
    w = assemble_weight(ck_weight(weight_choice), grid, label=weight_choice)
    k = assemble_dirichlet_form(transverse_gauge(field), grid)
    return _result(inequality, min_rayleigh(k, w), 0.0, grid, tol_mesh)


def hp_disk_probe(
    radius: float = 1.0,
    grid: Optional[PolarGrid] = None,
    n_r: int = 128,
    n_theta: int = 16,
    tol_mesh: Optional[float] = None,
) -> HardyProbeResult:
    """∫|∇ψ|² ≥ c ∫|ψ|²/|x| on the disk of the given radius; reference 1/(4R)."""
    if not radius > 0:
        raise ProbeRejected(f"disk radius must be positive, got {radius}")
    grid = grid or build_grid(0.0, radius, n_r, n_theta)
    if grid.r_max != radius:
        raise ProbeRejected(f"grid radius {grid.r_max} differs from {radius}")
    w = assemble_weight(lambda r: 1.0 / r, grid, rule="cell", label="1/r")
    k = assemble_dirichlet_form(zero_potential(), grid)
    return _result(
        InequalityId.HP_DISK, min_rayleigh(k, w), 1.0 / (4.0 * radius), grid, tol_mesh
    )


def weighted_classical_probe(
    dimension: int, grid: PolarGrid, tol_mesh: Optional[float] = None
) -> HardyProbeResult:
    """∫|x||∇ψ|² ≥ c ∫|ψ|²/|x|; reference (d−1)²/4.

    Only d = 2 is computed; other dimensions report the reference alone.
    """
    reference = (dimension - 1) ** 2 / 4.0
    if dimension != 2:
        return HardyProbeResult(
            inequality_id=InequalityId.WEIGHTED_CLASSICAL,
            computed_constant=reference,
            reference_bound=reference,
            grid_params={"dimension": dimension},
            tol_mesh=get_settings().mesh.tol_mesh if tol_mesh is None else tol_mesh,
            notice=f"arithmetic only: d={dimension} is not discretized",
        )
    w = assemble_weight(lambda r: 1.0 / r, grid, rule="cell", label="1/r")
    k = assemble_dirichlet_form(zero_potential(), grid, radial_weight=lambda r: r)
    return _result(InequalityId.WEIGHTED_CLASSICAL, min_rayleigh(k, w), reference, grid, tol_mesh)


def _require_flux(alpha: AngularFluxDensity) -> float:
    beta = alpha.flux_distance
    if beta == 0.0:
        raise ProbeRejected(
            f"mean flux {alpha.mean} is an integer: the Aharonov–Bohm form has no Hardy gain"
        )
    return beta


def ab_probe(
    alpha: AngularFluxDensity, grid: PolarGrid, tol_mesh: Optional[float] = None
) -> HardyProbeResult:
    """K_A[ψ] ≥ c ∫|ψ|²/r² for A = α(θ)/r θ̂; reference β²."""
    beta = _require_flux(alpha)
    k = assemble_dirichlet_form(ab_potential(alpha), grid)
    w = assemble_weight(lambda r, theta: 1.0 / r**2, grid, label="1/r²")
    return _result(InequalityId.AB, min_rayleigh(k, w), beta**2, grid, tol_mesh)


def ab_weighted_probe(
    alpha: AngularFluxDensity, grid: PolarGrid, tol_mesh: Optional[float] = None
) -> HardyProbeResult:
    """∫r|∇_Aψ|² ≥ c ∫|ψ|²/r; reference 1/4 + β²."""
    beta = alpha.flux_distance
    k = assemble_dirichlet_form(ab_potential(alpha), grid, radial_weight=lambda r: r)
    w = assemble_weight(lambda r, theta: 1.0 / r, grid, label="1/r")
    return _result(
        InequalityId.AB_WEIGHTED, min_rayleigh(k, w), 0.25 + beta**2, grid, tol_mesh
    )


def circle_probe(alpha: AngularFluxDensity, n_modes: int = 64) -> HardyProbeResult:
    """Spectral circle eigenvalue against β²; exact up to truncation, so tol_mesh = 1e-6."""
    spectrum = circle_spectrum(alpha, n_modes)
    result = HardyProbeResult(
        inequality_id=InequalityId.CIRCLE,
        computed_constant=spectrum.value,
        reference_bound=alpha.flux_distance**2,
        grid_params={"n_modes": spectrum.n_modes},
        tol_mesh=1e-6,
        converged=spectrum.converged,
        bias="none: spectral discretization of the circle",
    )
    logger.info(f"circle: λ₁={spectrum.value:.10g} vs β²={result.reference_bound:.10g}")
    return result


@dataclass
class ProbeSweep:
    """One probe repeated on growing grids."""

    inequality_id: InequalityId
    radii: list[float]
    results: list[HardyProbeResult] = field(default_factory=list)

    @property
    def constants(self) -> list[float]:
        return [r.computed_constant for r in self.results]

    @property
    def monotone_decreasing(self) -> bool:
        c = self.constants
        return all(b < a for a, b in zip(c, c[1:]))

    @property
    def last_drift(self) -> float:
        """Relative change of the constant over the last step."""
        c = self.constants
        if len(c) < 2 or c[-2] == 0:
            return math.nan
        return abs(c[-1] - c[-2]) / abs(c[-2])

    def as_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id.value,
            "radii": self.radii,
            "constants": self.constants,
            "monotone_decreasing": self.monotone_decreasing,
            "last_drift": self.last_drift,
        }


def sweep_probe(
    probe: Callable[[PolarGrid], HardyProbeResult],
    base: PolarGrid,
    radii: Sequence[float],
) -> ProbeSweep:
    """Run a probe on the nested family base.with_radius(R) for every R."""
    radii = sorted(float(r) for r in radii)
    results = [probe(base.with_radius(r)) for r in radii]
    inequality = results[0].inequality_id if results else InequalityId.LW
    sweep = ProbeSweep(inequality_id=inequality, radii=radii, results=results)
    logger.info(f"{inequality.value} sweep over {radii}: {sweep.constants}")
    return sweep
