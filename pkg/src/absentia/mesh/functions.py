"""Nodal functions on polar grids and their weighted integrals."""

from dataclasses import dataclass
from typing import Callable, Optional, Union
import logging

import numpy as np

from absentia.errors import AbsentiaError
from absentia.mesh.grid import PolarGrid

logger = logging.getLogger(__name__)

PolarEvaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]
Weight = Union[PolarEvaluator, np.ndarray, None]


class IntegrationError(AbsentiaError, ValueError):
    """Raised when an integrand or sample is not finite at some node."""

    def __init__(self, message: str, node: int, r: float, theta: float):
        self.node = node
        self.r = r
        self.theta = theta
        super().__init__(f"{message} at node {node} (r={r:.6g}, θ={theta:.6g})")


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex (or real) values at every node of a grid."""

    values: np.ndarray
    grid: PolarGrid

    def __post_init__(self) -> None:
        if self.values.shape != (self.grid.n_nodes,):
            raise ValueError(
                f"expected {self.grid.n_nodes} nodal values, got shape {self.values.shape}"
            )

    @classmethod
    def from_unknowns(cls, vector: np.ndarray, grid: PolarGrid) -> "GridFunction":
        return cls(values=grid.embed(vector), grid=grid)

    @property
    def unknowns(self) -> np.ndarray:
        return self.grid.restrict(self.values)

    def abs2(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(values=np.asarray(values), grid=self.grid)

    def __mul__(self, other: Union["GridFunction", np.ndarray, complex]) -> "GridFunction":
        factor = other.values if isinstance(other, GridFunction) else other
        return self.with_values(self.values * factor)

    __rmul__ = __mul__


def _first_bad(values: np.ndarray) -> Optional[int]:
    bad = np.flatnonzero(~np.isfinite(values))
    return int(bad[0]) if bad.size else None


def _evaluate(grid: PolarGrid, f: PolarEvaluator, nodes: np.ndarray, what: str) -> np.ndarray:
    r, theta = grid.node_r[nodes], grid.node_theta[nodes]
    try:
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.asarray(f(r, theta))
    except Exception as e:
        for k, node in enumerate(nodes):
            try:
                f(r[k : k + 1], theta[k : k + 1])
            except Exception:
                raise IntegrationError(
                    f"{what} failed: {e}", int(node), float(r[k]), float(theta[k])
                ) from e
        raise
    values = np.broadcast_to(values, r.shape)
    bad = _first_bad(values)
    if bad is not None:
        node = int(nodes[bad])
        raise IntegrationError(
            f"{what} is not finite", node, float(grid.node_r[node]), float(grid.node_theta[node])
        )
    return np.array(values)


def sample(grid: PolarGrid, f: PolarEvaluator, test_function: bool = True) -> GridFunction:
    """Evaluate f(r, θ) at every node.

    Args:
        grid: Target grid
        f: Vectorized pointwise evaluator in polar coordinates
        test_function: Force zero on Dirichlet nodes

    Returns:
        GridFunction of the samples

    Raises:
        IntegrationError: If f fails or is not finite, naming the first bad node
    """
    nodes = np.flatnonzero(~grid.boundary_flags) if test_function else np.arange(grid.n_nodes)
    values = np.zeros(grid.n_nodes, dtype=complex)
    values[nodes] = _evaluate(grid, f, nodes, "sample")
    if not np.any(values.imag):
        values = values.real.copy()
    return GridFunction(values=values, grid=grid)


def weight_values(grid: PolarGrid, w: Weight, nodes: Optional[np.ndarray] = None) -> np.ndarray:
    """Nodal values of a weight given as evaluator, array or None (meaning 1)."""
    nodes = np.arange(grid.n_nodes) if nodes is None else nodes
    if w is None:
        return np.ones(nodes.size)
    if callable(w):
        return _evaluate(grid, w, nodes, "weight")
    values = np.asarray(w, dtype=float)[nodes]
    bad = _first_bad(values)
    if bad is not None:
        node = int(nodes[bad])
        raise IntegrationError(
            "weight is not finite", node, float(grid.node_r[node]), float(grid.node_theta[node])
        )
    return values


def integrate(grid: PolarGrid, w: Weight, psi: Optional[GridFunction] = None) -> float:
    """Σ quad_weight · w · |ψ|², the discrete ∫ w|ψ|².

    Nodes where ψ vanishes are skipped, so weights singular on Dirichlet
    rings do not trip the finiteness check.
    """
    if psi is None:
        nodes = np.arange(grid.n_nodes)
        density = np.ones(grid.n_nodes)
    else:
        if psi.grid is not grid:
            raise ValueError("grid function lives on a different grid")
        nodes = np.flatnonzero(psi.values != 0)
        density = psi.abs2()[nodes]
    values = weight_values(grid, w, nodes)
    return float(np.sum(grid.quad_weights[nodes] * values * density))
