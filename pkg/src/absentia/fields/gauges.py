"""Vector potentials and the link phases used to discretize them."""

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, Optional
import logging

import numpy as np

from absentia.fields.angular import AngularFluxDensity
from absentia.fields.profiles import FieldModelError, FluxFunction, RadialFieldProfile, flux_profile

if TYPE_CHECKING:
    from absentia.mesh.grid import PolarGrid

logger = logging.getLogger(__name__)

CartesianField = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
ScalarField = Callable[[np.ndarray, np.ndarray], np.ndarray]


class GaugeTag(str, Enum):
    """How a vector potential was built."""

    TRANSVERSE_RADIAL = "transverse_radial"
    AHARONOV_BOHM = "aharonov_bohm"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class VectorPotentialField:
    """A(x) in the plane, with the line integrals assembly needs.

    Radial and angular links follow the gauge: the transverse gauge carries
    the exact enclosed flux on angular links, the Aharonov–Bohm gauge carries
    ∫α dθ, and explicit potentials use the chord-midpoint rule.
    """

    gauge_tag: GaugeTag
    evaluator: CartesianField
    label: str = "A"
    origin_singular: bool = False
    flux: Optional[FluxFunction] = None
    alpha: Optional[AngularFluxDensity] = None
    declared_field: Optional[ScalarField] = None
    gauge_trivial: bool = False
    metadata: dict[str, float] = field(default_factory=dict)

    def __call__(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.evaluator(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def magnetic_field(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Declared curl of A at the given points."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.gauge_tag is GaugeTag.TRANSVERSE_RADIAL and self.flux is not None:
            return self.flux.profile(np.hypot(x, y))
        if self.gauge_tag is GaugeTag.AHARONOV_BOHM:
            return np.zeros_like(x)
        if self.declared_field is None:
            raise FieldModelError("explicit potential has no declared magnetic field", self.label)
        return np.asarray(self.declared_field(x, y), dtype=float)

    def radial_link_phase(
        self, r_a: np.ndarray, r_b: np.ndarray, theta: np.ndarray
    ) -> np.ndarray:
        """∫ A·dl along the ray segment from (r_a, θ) to (r_b, θ)."""
        r_a, r_b, theta = np.broadcast_arrays(
            np.asarray(r_a, dtype=float),
            np.asarray(r_b, dtype=float),
            np.asarray(theta, dtype=float),
        )
        if self.gauge_tag is GaugeTag.TRANSVERSE_RADIAL:
            return np.zeros_like(r_a)
        if self.gauge_tag is GaugeTag.AHARONOV_BOHM:
            self._require_excised(np.minimum(r_a, r_b))
            return np.zeros_like(r_a)
        cos, sin = np.cos(theta), np.sin(theta)
        return self._chord_phase(r_a * cos, r_a * sin, r_b * cos, r_b * sin)

    def angular_link_phase(
        self, r: np.ndarray, theta_a: np.ndarray, theta_b: np.ndarray
    ) -> np.ndarray:
        """Phase carried by the angular link from (r, θ_a) to (r, θ_b)."""
        r, theta_a, theta_b = np.broadcast_arrays(
            np.asarray(r, dtype=float),
            np.asarray(theta_a, dtype=float),
            np.asarray(theta_b, dtype=float),
        )
        if self.gauge_tag is GaugeTag.TRANSVERSE_RADIAL and self.flux is not None:
            return self.flux(r) * (theta_b - theta_a)
        if self.gauge_tag is GaugeTag.AHARONOV_BOHM and self.alpha is not None:
            self._require_excised(r)
            return self.alpha.integral(theta_a, theta_b)
        return self._chord_phase(
            r * np.cos(theta_a), r * np.sin(theta_a), r * np.cos(theta_b), r * np.sin(theta_b)
        )

    def with_gauge_shift(
        self,
        gradient: CartesianField,
        label: Optional[str] = None,
    ) -> "VectorPotentialField":
        """Explicit potential A + ∇χ carrying the same declared field."""
        base = self

        def shifted(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            ax, ay = base(x, y)
            gx, gy = gradient(x, y)
            return ax + gx, ay + gy

        return VectorPotentialField(
            gauge_tag=GaugeTag.EXPLICIT,
            evaluator=shifted,
            label=label or f"{self.label}+grad",
            origin_singular=self.origin_singular,
            declared_field=self.magnetic_field,
        )

    def _chord_phase(
        self, xa: np.ndarray, ya: np.ndarray, xb: np.ndarray, yb: np.ndarray
    ) -> np.ndarray:
        ax, ay = self((xa + xb) / 2.0, (ya + yb) / 2.0)
        return ax * (xb - xa) + ay * (yb - ya)

    def _require_excised(self, r: np.ndarray) -> None:
        if np.any(r <= 0):
            raise FieldModelError(
                "Aharonov–Bohm potential evaluated at the origin", self.label
            )


def transverse_gauge(field: RadialFieldProfile) -> VectorPotentialField:
    """A = Φ_B(r)/r² (−y, x), smooth at the origin for polynomial fields."""
    flux = flux_profile(field)

    def evaluate(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        scale = flux.over_r2(np.hypot(x, y))
        return -y * scale, x * scale

    return VectorPotentialField(
        gauge_tag=GaugeTag.TRANSVERSE_RADIAL,
        evaluator=evaluate,
        label=f"transverse[{field.name}]",
        flux=flux,
        gauge_trivial=field.is_zero,
    )


def ab_potential(alpha: AngularFluxDensity) -> VectorPotentialField:
    """A = α(θ)/r θ̂; singular at the origin, so grids must excise it."""

    def evaluate(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        r2 = x**2 + y**2
        if np.any(r2 == 0):
            raise FieldModelError(
                "Aharonov–Bohm potential evaluated at the origin", "aharonov_bohm"
            )
        a = alpha(np.arctan2(y, x))
        return -y * a / r2, x * a / r2

    return VectorPotentialField(
        gauge_tag=GaugeTag.AHARONOV_BOHM,
        evaluator=evaluate,
        label="aharonov_bohm",
        origin_singular=True,
        alpha=alpha,
        gauge_trivial=alpha.flux_distance == 0.0,
        metadata={"mean_flux": alpha.mean, "beta": alpha.flux_distance},
    )


def explicit_potential(
    evaluator: CartesianField,
    magnetic_field: Optional[ScalarField] = None,
    label: str = "explicit",
    origin_singular: bool = False,
) -> VectorPotentialField:
    """Wrap a user-supplied A(x, y); links use the chord-midpoint rule."""
    return VectorPotentialField(
        gauge_tag=GaugeTag.EXPLICIT,
        evaluator=evaluator,
        label=label,
        origin_singular=origin_singular,
        declared_field=magnetic_field,
    )


def zero_potential() -> VectorPotentialField:
    return transverse_gauge(RadialFieldProfile.zero())


def curl_residuals(potential: VectorPotentialField, grid: "PolarGrid") -> np.ndarray:
    """|curl A − B| at interior ring nodes, by central differences in polar form.

    Rings adjacent to the boundary or to the origin node are skipped, as
    they lack a full three-point stencil.
    """
    first = 2 if grid.has_origin else 1
    rings = range(first, grid.n_r)
    if len(rings) == 0:
        return np.zeros(0)

    theta = grid.thetas
    dtheta = grid.dtheta
    residuals = []
    for i in rings:
        r_minus, r, r_plus = grid.radii[i - 1], grid.radii[i], grid.radii[i + 1]
        rA = [_r_times_angular(potential, rr, theta) for rr in (r_minus, r, r_plus)]
        h_minus, h_plus = r - r_minus, r_plus - r
        d_r = (
            h_minus**2 * rA[2] - h_plus**2 * rA[0] + (h_plus**2 - h_minus**2) * rA[1]
        ) / (h_minus * h_plus * (h_minus + h_plus))

        a_r = _radial_component(potential, r, theta)
        d_theta = (np.roll(a_r, -1) - np.roll(a_r, 1)) / (2.0 * dtheta)

        curl = (d_r - d_theta) / r
        declared = potential.magnetic_field(r * np.cos(theta), r * np.sin(theta))
        residuals.append(np.abs(curl - declared))
    return np.concatenate(residuals)


def curl_check(potential: VectorPotentialField, grid: "PolarGrid") -> float:
    """Max-abs discrepancy between the discrete curl of A and its declared B.

    Args:
        potential: Vector potential with a declared field
        grid: Polar grid supplying the interior nodes

    Returns:
        Maximum residual, 0.0 when the grid has no interior ring

    Raises:
        FieldModelError: If an explicit potential declares no field
    """
    residuals = curl_residuals(potential, grid)
    value = float(residuals.max()) if residuals.size else 0.0
    logger.debug(f"curl_check[{potential.label}] on {grid.describe()}: {value:.3e}")
    return value


def _r_times_angular(potential: VectorPotentialField, r: float, theta: np.ndarray) -> np.ndarray:
    ax, ay = potential(r * np.cos(theta), r * np.sin(theta))
    return r * (-ax * np.sin(theta) + ay * np.cos(theta))


def _radial_component(potential: VectorPotentialField, r: float, theta: np.ndarray) -> np.ndarray:
    ax, ay = potential(r * np.cos(theta), r * np.sin(theta))
    return ax * np.cos(theta) + ay * np.sin(theta)
