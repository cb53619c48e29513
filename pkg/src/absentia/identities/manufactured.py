"""Manufactured exact eigenpairs of magnetic Schrödinger operators.

A mode u = e^{iℓθ} f(r) with f = r^ℓ e^{−ar²/2} solves
(−i∇+A)²u + Vu = λu exactly for the radial potential

    V = λ + a²r² − 2a(1+ℓ) − (2ℓΦ + Φ²)/r²,

where Φ is the flux of A (Φ_B in the transverse gauge, ᾱ for a constant
Aharonov–Bohm density).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional
import logging
import math

import numpy as np
from scipy.optimize import brentq

from absentia.errors import AbsentiaError
from absentia.fields.gauges import GaugeTag, VectorPotentialField
from absentia.mesh.functions import GridFunction, sample
from absentia.mesh.grid import PolarGrid

logger = logging.getLogger(__name__)

TAIL_LOG_RATIO = math.log(1e-16)
RESIDUAL_SAMPLES = 1000
RESIDUAL_TOL = 1e-10


class ManufactureError(AbsentiaError, ValueError):
    """Raised when a profile or potential cannot produce an exact eigenpair."""


@dataclass(frozen=True)
class GaussianMode:
    """u = c·e^{iℓθ} r^ℓ e^{−ar²/2}; c = 0 gives the trivial solution."""

    a: float = 1.0
    ell: int = 0
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ManufactureError(f"profile must decay: a must be positive, got {self.a}")
        if self.ell < 0:
            raise ManufactureError(f"angular momentum must be non-negative, got {self.ell}")

    def f(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self.amplitude * r**self.ell * np.exp(-self.a * r**2 / 2.0)

    def df(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        e = self.amplitude * np.exp(-self.a * r**2 / 2.0)
        lead = self.ell * r ** (self.ell - 1) if self.ell > 0 else 0.0
        return (lead - self.a * r ** (self.ell + 1)) * e

    def d2f(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        ell, a = self.ell, self.a
        e = self.amplitude * np.exp(-a * r**2 / 2.0)
        lead = ell * (ell - 1) * r ** (ell - 2) if ell > 1 else 0.0
        return (lead - a * (2 * ell + 1) * r**ell + a**2 * r ** (ell + 2)) * e

    def __call__(self, r: np.ndarray, theta: np.ndarray) -> np.ndarray:
        values = self.f(r)
        if self.ell == 0:
            return values
        return values * np.exp(1j * self.ell * np.asarray(theta))

    @property
    def peak_radius(self) -> float:
        return math.sqrt(self.ell / self.a)

    def working_radius(self) -> float:
        """Radius beyond which f² < 10⁻¹⁶ · max f²."""
        peak = self.peak_radius
        log_peak = 2.0 * self.ell * math.log(peak) - self.a * peak**2 if peak > 0 else 0.0

        def excess(r: float) -> float:
            value = 2.0 * (self.ell * math.log(r) if self.ell else 0.0) - self.a * r**2
            return value - log_peak - TAIL_LOG_RATIO

        hi = max(peak, 1.0)
        while excess(hi) > 0:
            hi *= 2.0
        return float(brentq(excess, max(peak, 1e-12), hi))


class Decomposition(str, Enum):
    ALL_V1 = "all_V1"
    ALL_V2 = "all_V2"
    SPLIT = "split"


@dataclass(frozen=True)
class SplitSpec:
    """Smoothed split V⁽¹⁾ = χV, V⁽²⁾ = (1 − χ)V with χ = ½(1 − tanh((r − r₀)/w))."""

    kind: Decomposition = Decomposition.ALL_V1
    radius: float = 1.0
    width: float = 1e-3

    def chi(self, r: np.ndarray) -> np.ndarray:
        if self.kind is Decomposition.ALL_V1:
            return np.ones_like(r)
        if self.kind is Decomposition.ALL_V2:
            return np.zeros_like(r)
        return 0.5 * (1.0 - np.tanh((r - self.radius) / self.width))

    def dchi(self, r: np.ndarray) -> np.ndarray:
        if self.kind is not Decomposition.SPLIT:
            return np.zeros_like(r)
        return -0.5 / self.width / np.cosh((r - self.radius) / self.width) ** 2

    @property
    def note(self) -> str:
        if self.kind is Decomposition.SPLIT:
            return f"split at r0={self.radius:g}, smoothed over width {self.width:g}"
        return self.kind.value


@dataclass(frozen=True)
class ManufacturedEigenpair:
    """Exact solution (u, λ) with its derived potential."""

    mode: GaussianMode
    potential_field: VectorPotentialField
    lam: float
    equation_residual: float

    def flux(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.potential_field.gauge_tag is GaugeTag.AHARONOV_BOHM:
            return np.full_like(r, self.potential_field.alpha.mean)
        return self.potential_field.flux(r)

    def field(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.potential_field.gauge_tag is GaugeTag.AHARONOV_BOHM:
            return np.zeros_like(r)
        return self.potential_field.flux.profile(r)

    def kappa(self, r: np.ndarray) -> np.ndarray:
        """(ℓ + Φ)/r for r > 0, the angular part of ∇_A u over f."""
        r = np.asarray(r, dtype=float)
        return (self.mode.ell + self.flux(r)) / r

    def potential(self, r: np.ndarray) -> np.ndarray:
        """V(r) = λ + a²r² − 2a(1+ℓ) − (2ℓΦ + Φ²)/r²."""
        r = np.asarray(r, dtype=float)
        a, ell = self.mode.a, self.mode.ell
        return self.lam + a**2 * r**2 - 2.0 * a * (1 + ell) - self._flux_term(r)

    def d_rv(self, r: np.ndarray) -> np.ndarray:
        """∂_r(rV) = λ + 3a²r² − 2a(1+ℓ) − 2(ℓ+Φ)B + (2ℓΦ + Φ²)/r²."""
        r = np.asarray(r, dtype=float)
        a, ell = self.mode.a, self.mode.ell
        return (
            self.lam
            + 3.0 * a**2 * r**2
            - 2.0 * a * (1 + ell)
            - 2.0 * (ell + self.flux(r)) * self.field(r)
            + self._flux_term(r)
        )

    def _flux_term(self, r: np.ndarray) -> np.ndarray:
        """(2ℓΦ + Φ²)/r², continued at the origin for the transverse gauge."""
        ell = self.mode.ell
        if self.potential_field.gauge_tag is GaugeTag.AHARONOV_BOHM:
            phi = self.flux(r)
            return (2 * ell * phi + phi**2) / r**2
        flux = self.potential_field.flux
        return 2 * ell * flux.over_r2(r) + flux.over_r(r) ** 2

    def sample(self, grid: PolarGrid) -> GridFunction:
        return sample(grid, self.mode, test_function=True)


def _transverse_or_constant_ab(potential: VectorPotentialField) -> None:
    if potential.gauge_tag is GaugeTag.TRANSVERSE_RADIAL and potential.flux is not None:
        return
    if potential.gauge_tag is GaugeTag.AHARONOV_BOHM and potential.alpha.is_constant:
        return
    raise ManufactureError(
        f"'{potential.label}' is neither transverse nor a constant Aharonov–Bohm potential; "
        "the derived potential would not be real and radial"
    )


def manufacture(
    mode: GaussianMode,
    potential: VectorPotentialField,
    lam: float = 0.0,
    r_max: Optional[float] = None,
) -> ManufacturedEigenpair:
    """Build the exact eigenpair of a Gaussian mode and check it pointwise.

    Args:
        mode: Radial profile and angular momentum
        potential: Transverse-gauge or constant Aharonov–Bohm potential
        lam: Real eigenvalue
        r_max: Sampling radius of the residual check; the mode's working radius by default

    Returns:
        ManufacturedEigenpair with the analytic residual of the eigenvalue equation

    Raises:
        ManufactureError: If the gauge is unsupported, ℓ = 0 with an
            Aharonov–Bohm potential, or the residual exceeds 1e-10
    """
    _transverse_or_constant_ab(potential)
    if potential.gauge_tag is GaugeTag.AHARONOV_BOHM and mode.ell < 1:
        raise ManufactureError("Aharonov–Bohm pairs need ℓ ≥ 1 for a finite-energy mode")

    pair = ManufacturedEigenpair(mode, potential, float(lam), 0.0)
    r_max = r_max or mode.working_radius()
    r = np.linspace(r_max / RESIDUAL_SAMPLES, r_max, RESIDUAL_SAMPLES)
    f, df, d2f = mode.f(r), mode.df(r), mode.d2f(r)
    kinetic = -d2f - df / r + ((mode.ell + pair.flux(r)) / r) ** 2 * f
    residual_terms = kinetic + (pair.potential(r) - lam) * f
    scale = np.abs(d2f) + np.abs(df / r) + np.abs(pair.potential(r) * f) + abs(lam) * np.abs(f)
    with np.errstate(divide="ignore", invalid="ignore"):
        relative = np.where(scale > 0, np.abs(residual_terms) / scale, 0.0)
    worst = float(np.max(relative))
    if worst > RESIDUAL_TOL:
        raise ManufactureError(f"eigenvalue equation residual {worst:.2e} exceeds {RESIDUAL_TOL:g}")
    logger.debug(f"Manufactured pair a={mode.a} ℓ={mode.ell} λ={lam}: residual {worst:.2e}")
    return ManufacturedEigenpair(mode, potential, float(lam), worst)
