"""Polar finite-volume grids on disks and annuli."""

from dataclasses import dataclass
from typing import Callable, Literal, Optional
import logging
import math

import numpy as np

from absentia.errors import AbsentiaError

logger = logging.getLogger(__name__)

Spacing = Literal["power", "geometric"]

GAUSS_ORDER = 8


class GridError(AbsentiaError, ValueError):
    """Raised for invalid grid parameters."""

    def __init__(self, message: str, parameter: Optional[str] = None):
        self.parameter = parameter
        super().__init__(f"{parameter}: {message}" if parameter else message)


@dataclass(frozen=True, eq=False)
class PolarGrid:
    """Nodes (r_i, θ_j) with finite-volume dual cells.

    Ring 0 collapses to a single node when r_min = 0. Quadrature weights are
    the areas of the dual cells bounded by the radial midpoints, so they sum
    to π(r_max² − r_min²) and stay positive at the origin.
    """

    r_min: float
    r_max: float
    n_r: int
    n_theta: int
    grading: float
    spacing: Spacing
    radii: np.ndarray
    ring_offsets: np.ndarray
    node_r: np.ndarray
    node_theta: np.ndarray
    node_ring: np.ndarray
    quad_weights: np.ndarray
    boundary_flags: np.ndarray
    cell_lower: np.ndarray
    cell_upper: np.ndarray

    @property
    def has_origin(self) -> bool:
        return self.r_min == 0.0

    @property
    def n_nodes(self) -> int:
        return int(self.node_r.size)

    @property
    def dtheta(self) -> float:
        return 2.0 * math.pi / self.n_theta

    @property
    def thetas(self) -> np.ndarray:
        return np.arange(self.n_theta) * self.dtheta

    @property
    def x(self) -> np.ndarray:
        return self.node_r * np.cos(self.node_theta)

    @property
    def y(self) -> np.ndarray:
        return self.node_r * np.sin(self.node_theta)

    @property
    def unknowns(self) -> np.ndarray:
        """Indices of nodes that are not Dirichlet."""
        return np.flatnonzero(~self.boundary_flags)

    @property
    def n_unknowns(self) -> int:
        return int(np.count_nonzero(~self.boundary_flags))

    @property
    def unknown_index(self) -> np.ndarray:
        """Map node -> unknown position, −1 on Dirichlet nodes."""
        index = np.full(self.n_nodes, -1, dtype=np.int64)
        index[self.unknowns] = np.arange(self.n_unknowns)
        return index

    @property
    def dual_lengths(self) -> np.ndarray:
        return self.cell_upper - self.cell_lower

    @property
    def midpoints(self) -> np.ndarray:
        return (self.radii[:-1] + self.radii[1:]) / 2.0

    def ring(self, i: int) -> np.ndarray:
        """Node indices of ring i."""
        return np.arange(self.ring_offsets[i], self.ring_offsets[i + 1])

    def ring_size(self, i: int) -> int:
        return int(self.ring_offsets[i + 1] - self.ring_offsets[i])

    def restrict(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values)[self.unknowns]

    def embed(self, vector: np.ndarray) -> np.ndarray:
        """Full nodal array from unknowns, zero on Dirichlet nodes."""
        vector = np.asarray(vector)
        out = np.zeros(self.n_nodes, dtype=vector.dtype)
        out[self.unknowns] = vector
        return out

    def cell_integral(
        self, radial_weight: Callable[[np.ndarray], np.ndarray], order: int = GAUSS_ORDER
    ) -> np.ndarray:
        """∫ w(r) over every node's dual cell, by Gauss–Legendre in r.

        Gauss points avoid the origin, so integrable singularities such as
        1/r are handled on full disks.
        """
        points, weights = np.polynomial.legendre.leggauss(order)
        ring_values = np.empty(self.n_r + 1)
        for i in range(self.n_r + 1):
            lo, hi = self.cell_lower[i], self.cell_upper[i]
            r = (hi - lo) / 2.0 * points + (hi + lo) / 2.0
            radial = float(np.sum(weights * radial_weight(r) * r) * (hi - lo) / 2.0)
            span = 2.0 * math.pi if self.ring_size(i) == 1 else self.dtheta
            ring_values[i] = radial * span
        return ring_values[self.node_ring]

    def with_radius(self, r_max: float) -> "PolarGrid":
        """Grid of the same family on a larger disk.

        Power-spaced disks grow n_r like (R'/R)^(1/grading), so grading 1
        with doubled radii and grading 2 with quadrupled radii nest exactly.
        Annuli scale both radii and keep n_r.
        """
        if self.has_origin:
            factor = (r_max / self.r_max) ** (1.0 / self.grading)
            n_r = max(4, int(round(self.n_r * factor)))
            return build_grid(0.0, r_max, n_r, self.n_theta, self.grading, self.spacing)
        scale = r_max / self.r_max
        return build_grid(
            self.r_min * scale, r_max, self.n_r, self.n_theta, self.grading, self.spacing
        )

    def describe(self) -> dict[str, float | int | str]:
        return {
            "r_min": self.r_min,
            "r_max": self.r_max,
            "n_r": self.n_r,
            "n_theta": self.n_theta,
            "grading": self.grading,
            "spacing": self.spacing,
        }


def _radii(r_min: float, r_max: float, n_r: int, grading: float, spacing: Spacing) -> np.ndarray:
    t = np.arange(n_r + 1) / n_r
    if spacing == "geometric":
        radii = r_min * (r_max / r_min) ** t
    else:
        radii = r_min + (r_max - r_min) * t**grading
    radii[0], radii[-1] = r_min, r_max
    return radii


def build_grid(
    r_min: float,
    r_max: float,
    n_r: int,
    n_theta: int,
    grading: float = 1.0,
    spacing: Spacing = "power",
) -> PolarGrid:
    """Build a polar grid on {r_min <= r <= r_max}.

    Args:
        r_min: Inner radius, 0 for a full disk
        r_max: Outer (Dirichlet) radius
        n_r: Number of radial intervals
        n_theta: Angular nodes per ring, even
        grading: Exponent of power spacing r = r_min + (r_max − r_min)(i/n_r)^grading
        spacing: "power" or "geometric"; geometric needs r_min > 0

    Returns:
        PolarGrid with Dirichlet flags at r_max, and at r_min when excised

    Raises:
        GridError: If a parameter is out of range
    """
    if not (math.isfinite(r_min) and math.isfinite(r_max)):
        raise GridError("radii must be finite", "r_max")
    if r_min < 0:
        raise GridError(f"must be non-negative, got {r_min}", "r_min")
    if not r_max > r_min:
        raise GridError(f"must exceed r_min={r_min}, got {r_max}", "r_max")
    if n_r < 4:
        raise GridError(f"must be at least 4, got {n_r}", "n_r")
    if n_theta < 8 or n_theta % 2:
        raise GridError(f"must be even and at least 8, got {n_theta}", "n_theta")
    if not grading > 0:
        raise GridError(f"must be positive, got {grading}", "grading")
    if spacing not in ("power", "geometric"):
        raise GridError(f"unknown spacing '{spacing}'", "spacing")
    if spacing == "geometric" and r_min == 0:
        raise GridError("geometric spacing needs r_min > 0", "spacing")

    radii = _radii(r_min, r_max, n_r, grading, spacing)
    has_origin = r_min == 0.0
    sizes = np.full(n_r + 1, n_theta, dtype=np.int64)
    if has_origin:
        sizes[0] = 1
    ring_offsets = np.concatenate([[0], np.cumsum(sizes)])

    dtheta = 2.0 * math.pi / n_theta
    node_ring = np.repeat(np.arange(n_r + 1), sizes)
    node_r = radii[node_ring]
    angles = np.arange(n_theta) * dtheta
    node_theta = np.concatenate(
        [np.zeros(1) if size == 1 else angles for size in sizes]
    )

    mid = (radii[:-1] + radii[1:]) / 2.0
    cell_lower = np.concatenate([[r_min], mid])
    cell_upper = np.concatenate([mid, [r_max]])
    ring_area = math.pi * (cell_upper**2 - cell_lower**2)
    quad_weights = (ring_area / sizes)[node_ring]

    boundary_flags = node_ring == n_r
    if not has_origin:
        boundary_flags |= node_ring == 0

    grid = PolarGrid(
        r_min=float(r_min),
        r_max=float(r_max),
        n_r=int(n_r),
        n_theta=int(n_theta),
        grading=float(grading),
        spacing=spacing,
        radii=radii,
        ring_offsets=ring_offsets,
        node_r=node_r,
        node_theta=node_theta,
        node_ring=node_ring,
        quad_weights=quad_weights,
        boundary_flags=boundary_flags,
        cell_lower=cell_lower,
        cell_upper=cell_upper,
    )
    logger.debug(f"Built grid {grid.describe()} with {grid.n_nodes} nodes")
    return grid


@dataclass(frozen=True)
class GridSpec:
    """Grid parameters of a scenario, reproducible at any outer radius."""

    r_max: float
    n_r: int
    n_theta: int
    r_min: float = 0.0
    grading: float = 1.0
    spacing: Spacing = "power"

    def build(self) -> PolarGrid:
        return build_grid(
            self.r_min, self.r_max, self.n_r, self.n_theta, self.grading, self.spacing
        )

    def at_radius(self, r_max: float) -> PolarGrid:
        return self.build().with_radius(r_max)


@dataclass(frozen=True)
class RadialRule:
    """Trapezoid rule on [0, r_max] with nodes r_max·(i/n)^grading."""

    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(cls, r_max: float, n: int, grading: float = 1.0) -> "RadialRule":
        if not r_max > 0:
            raise GridError(f"must be positive, got {r_max}", "r_max")
        if n < 2:
            raise GridError(f"must be at least 2, got {n}", "n")
        nodes = r_max * (np.arange(n + 1) / n) ** grading
        h = np.diff(nodes)
        weights = np.zeros(n + 1)
        weights[:-1] += h / 2.0
        weights[1:] += h / 2.0
        return cls(nodes=nodes, weights=weights)

    @property
    def n(self) -> int:
        return self.nodes.size - 1


def integrate_radial(rule: RadialRule, density: np.ndarray) -> float:
    """2π Σ wᵢ Dᵢ, the plane integral of a radial integrand with D = integrand·r."""
    return float(2.0 * math.pi * np.dot(rule.weights, density))
