"""Gauge-covariant finite-volume assembly of Hermitian forms."""

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Literal, Optional, Union
import logging

import numpy as np
import scipy.io
import scipy.sparse as sp

from absentia.errors import AbsentiaError
from absentia.fields.gauges import VectorPotentialField
from absentia.fields.profiles import FieldModelError
from absentia.mesh.functions import GridFunction, IntegrationError, PolarEvaluator, weight_values
from absentia.mesh.grid import PolarGrid

logger = logging.getLogger(__name__)

RadialWeight = Callable[[np.ndarray], np.ndarray]
WeightRule = Literal["nodal", "cell"]


class AssemblyError(AbsentiaError, ValueError):
    """Raised when a form or weight cannot be assembled on a grid."""

    def __init__(
        self,
        message: str,
        edge: Optional[tuple[int, int]] = None,
        suggestion: Optional[str] = None,
    ):
        self.edge = edge
        self.suggestion = suggestion
        where = f" on edge {edge}" if edge is not None else ""
        hint = f"; {suggestion}" if suggestion else ""
        super().__init__(f"{message}{where}{hint}")


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """Sparse Hermitian matrix on the unknowns of a grid (or on a bare vector space)."""

    matrix: sp.csr_matrix
    grid: Optional[PolarGrid] = None
    positive_semidefinite: bool = True
    label: str = "form"

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.matrix.data) or not np.any(self.matrix.data.imag)

    def is_hermitian(self) -> bool:
        """Exact check: every entry equals the conjugate of its transpose."""
        return (self.matrix != self.matrix.conj().T).nnz == 0

    def vector(self, psi: Union[GridFunction, np.ndarray]) -> np.ndarray:
        if isinstance(psi, GridFunction):
            return psi.unknowns
        return np.asarray(psi)

    def quadratic(self, psi: Union[GridFunction, np.ndarray]) -> float:
        """Real part of ψᴴKψ (the imaginary part vanishes for Hermitian K)."""
        v = self.vector(psi)
        return float(np.real(np.vdot(v, self.matrix @ v)))

    def apply(self, psi: Union[GridFunction, np.ndarray]) -> np.ndarray:
        return self.matrix @ self.vector(psi)

    def plus(self, mass: "WeightMass") -> "HermitianForm":
        return hamiltonian_form(self, mass)

    def dump(self, path: Union[str, Path]) -> Path:
        """Write the matrix in Matrix Market format."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        scipy.io.mmwrite(str(path), self.matrix, comment=self.label)
        logger.info(f"Dumped {self.label} ({self.dimension}×{self.dimension}) to {path}")
        return path


@dataclass(frozen=True, eq=False)
class WeightMass:
    """Diagonal weight matrix diag(quad_weight · w) on the unknowns."""

    diagonal: np.ndarray
    grid: Optional[PolarGrid] = None
    signed: bool = False
    label: str = "weight"

    @property
    def dimension(self) -> int:
        return int(self.diagonal.size)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.diagonal)

    @property
    def is_positive(self) -> bool:
        return bool(np.all(self.diagonal > 0))

    def as_matrix(self) -> sp.csr_matrix:
        return sp.diags(self.diagonal, format="csr")

    def total(self, psi: Union[GridFunction, np.ndarray]) -> float:
        v = psi.unknowns if isinstance(psi, GridFunction) else np.asarray(psi)
        return float(np.real(np.sum(self.diagonal * np.abs(v) ** 2)))


def _edge_list(
    potential: VectorPotentialField,
    grid: PolarGrid,
    radial_weight: Optional[RadialWeight],
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Endpoints, coefficients and link phases of every edge."""
    rho = radial_weight if radial_weight is not None else (lambda r: np.ones_like(r))
    heads, tails, coeffs, phases = [], [], [], []
    dtheta = grid.dtheta
    angles = grid.thetas
    mid = grid.midpoints

    for i in range(grid.n_r):
        outer = grid.ring(i + 1)
        h = grid.radii[i + 1] - grid.radii[i]
        if grid.ring_size(i) == 1:
            inner = np.repeat(grid.ring(i), grid.n_theta)
        else:
            inner = grid.ring(i)
        c = np.full(grid.n_theta, float(rho(np.array([mid[i]]))[0]) * mid[i] * dtheta / h)
        phase = _link(
            lambda: potential.radial_link_phase(grid.radii[i], grid.radii[i + 1], angles),
            (int(inner[0]), int(outer[0])),
        )
        heads.append(inner)
        tails.append(outer)
        coeffs.append(c)
        phases.append(phase)

    for i in range(grid.n_r + 1):
        if grid.ring_size(i) == 1:
            continue
        nodes = grid.ring(i)
        r = grid.radii[i]
        c = float(rho(np.array([r]))[0]) * grid.dual_lengths[i] / (r * dtheta)
        phase = _link(
            lambda: potential.angular_link_phase(r, angles, angles + dtheta),
            (int(nodes[0]), int(nodes[1])),
        )
        heads.append(nodes)
        tails.append(np.roll(nodes, -1))
        coeffs.append(np.full(grid.n_theta, c))
        phases.append(phase)

    return (
        np.concatenate(heads),
        np.concatenate(tails),
        np.concatenate(coeffs),
        np.concatenate(phases),
    )


def _link(compute: Callable[[], np.ndarray], edge: tuple[int, int]) -> np.ndarray:
    try:
        with np.errstate(divide="ignore", invalid="ignore"):
            phase = np.asarray(compute(), dtype=float)
    except FieldModelError as e:
        raise AssemblyError(
            f"vector potential is singular: {e}",
            edge=edge,
            suggestion="excise the origin by building the grid with r_min > 0",
        ) from e
    if not np.all(np.isfinite(phase)):
        raise AssemblyError(
            "link phase is not finite",
            edge=edge,
            suggestion="excise the origin by building the grid with r_min > 0",
        )
    return phase


def assemble_dirichlet_form(
    potential: VectorPotentialField,
    grid: PolarGrid,
    radial_weight: Optional[RadialWeight] = None,
) -> HermitianForm:
    """Assemble K_A with ψᴴK_Aψ = Σ_edges c |e^{iφ}ψ_b − ψ_a|².

    Args:
        potential: Vector potential supplying the link phases
        grid: Polar grid; Dirichlet rows and columns are eliminated
        radial_weight: Optional ρ(r) ≥ 0 multiplying every edge coefficient

    Returns:
        Exactly Hermitian, positive semi-definite form

    Raises:
        AssemblyError: If A is singular on some edge
    """
    if potential.origin_singular and grid.has_origin:
        raise AssemblyError(
            f"'{potential.label}' is singular at the origin but the grid contains it",
            edge=(0, 1),
            suggestion="excise the origin by building the grid with r_min > 0",
        )

    heads, tails, coeffs, phases = _edge_list(potential, grid, radial_weight)
    if np.any(coeffs < 0) or not np.all(np.isfinite(coeffs)):
        raise AssemblyError("radial weight must be finite and non-negative")

    index = grid.unknown_index
    a, b = index[heads], index[tails]
    real = not np.any(phases)
    link = np.exp(1j * phases) if not real else np.ones_like(phases)

    rows, cols, vals = [], [], []
    for u in (a, b):
        keep = u >= 0
        rows.append(u[keep])
        cols.append(u[keep])
        vals.append(coeffs[keep])
    both = (a >= 0) & (b >= 0)
    off = -coeffs[both] * link[both]
    rows += [a[both], b[both]]
    cols += [b[both], a[both]]
    vals += [off, np.conj(off)]

    n = grid.n_unknowns
    dtype = float if real else complex
    matrix = sp.coo_matrix(
        (np.concatenate(vals).astype(dtype), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    ).tocsr()
    matrix.sum_duplicates()
    logger.debug(
        f"Assembled K[{potential.label}] on {grid.describe()}: {n} unknowns, {matrix.nnz} entries"
    )
    weighted = "" if radial_weight is None else "·ρ"
    return HermitianForm(matrix=matrix, grid=grid, label=f"K{weighted}[{potential.label}]")


def covariant_radial_difference(
    potential: VectorPotentialField, grid: PolarGrid, psi: GridFunction
) -> np.ndarray:
    """(e^{iφ}ψ_b − ψ_a)/h on every radial edge, shaped (n_r, n_theta)."""
    angles = grid.thetas
    out = np.empty((grid.n_r, grid.n_theta), dtype=complex)
    for i in range(grid.n_r):
        inner = grid.ring(i)
        if inner.size == 1:
            inner = np.repeat(inner, grid.n_theta)
        outer = grid.ring(i + 1)
        phase = _link(
            lambda: potential.radial_link_phase(grid.radii[i], grid.radii[i + 1], angles),
            (int(inner[0]), int(outer[0])),
        )
        h = grid.radii[i + 1] - grid.radii[i]
        out[i] = (np.exp(1j * phase) * psi.values[outer] - psi.values[inner]) / h
    return out


def assemble_weight(
    w: Union[PolarEvaluator, RadialWeight],
    grid: PolarGrid,
    rule: WeightRule = "nodal",
    signed: bool = False,
    label: str = "weight",
) -> WeightMass:
    """Diagonal weight on the unknowns.

    The nodal rule uses quad_weight · w(r, θ). The cell rule integrates a
    radial w(r) over every dual cell, which keeps 1/r weights finite on full
    disks.

    Raises:
        AssemblyError: If an entry is not finite, or negative without ``signed``
    """
    nodes = grid.unknowns
    if rule == "cell":
        try:
            with np.errstate(divide="ignore", invalid="ignore"):
                diagonal = grid.cell_integral(w)[nodes]  # type: ignore[arg-type]
        except Exception as e:
            raise AssemblyError(f"cell integration of '{label}' failed: {e}") from e
        bad = np.flatnonzero(~np.isfinite(diagonal))
        if bad.size:
            node = int(nodes[bad[0]])
            raise AssemblyError(f"weight '{label}' has infinite entries", edge=(node, node))
    elif rule == "nodal":
        try:
            diagonal = grid.quad_weights[nodes] * weight_values(grid, w, nodes)
        except IntegrationError as e:
            raise AssemblyError(
                f"weight '{label}' has infinite entries: {e}", edge=(e.node, e.node)
            ) from e
    else:
        raise AssemblyError(f"Unknown weight rule: {rule}")

    if not signed and np.any(diagonal < 0):
        node = int(nodes[np.flatnonzero(diagonal < 0)[0]])
        raise AssemblyError(
            f"sign flag mismatch: weight '{label}' is negative but signed=False",
            edge=(node, node),
        )
    return WeightMass(
        diagonal=np.asarray(diagonal, dtype=float), grid=grid, signed=signed, label=label
    )


def mass_matrix(grid: PolarGrid) -> WeightMass:
    """Quadrature mass diag(quad_weight) on the unknowns."""
    return WeightMass(diagonal=grid.quad_weights[grid.unknowns].copy(), grid=grid, label="mass")


def potential_mass(
    values: Callable[[np.ndarray], np.ndarray], grid: PolarGrid, label: str = "V"
) -> WeightMass:
    """Signed nodal mass of a real radial potential."""
    return assemble_weight(lambda r, theta: values(r), grid, signed=True, label=label)


def hamiltonian_form(dirichlet: HermitianForm, v_mass: WeightMass) -> HermitianForm:
    """K_A + diag(V): the form of (−i∇+A)² + V on the grid.

    Raises:
        AssemblyError: If the masses live on another grid or V is complex
    """
    if dirichlet.grid is not v_mass.grid:
        raise AssemblyError("potential mass was assembled on a different grid")
    if dirichlet.dimension != v_mass.dimension:
        raise AssemblyError(
            f"dimension mismatch: form {dirichlet.dimension}, mass {v_mass.dimension}"
        )
    if np.iscomplexobj(v_mass.diagonal) and np.any(np.imag(v_mass.diagonal)):
        raise AssemblyError("complex potential rejected: the Hamiltonian form needs real V")
    if v_mass.is_zero:
        return dirichlet
    matrix = (dirichlet.matrix + sp.diags(np.real(v_mass.diagonal))).tocsr()
    return HermitianForm(
        matrix=matrix,
        grid=dirichlet.grid,
        positive_semidefinite=bool(np.all(v_mass.diagonal >= 0)),
        label=f"H[{dirichlet.label}+{v_mass.label}]",
    )

