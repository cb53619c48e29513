"""Lowest eigenpairs of Hermitian pencils and Rayleigh-quotient extrema.

Shift-invert runs ARPACK on D = (H − σM)⁻¹M and maps its dominant
eigenvalues μ back through λ = 1/μ + σ. The Ritz vectors are then
M-orthonormalized by a small Rayleigh–Ritz step, which also separates
degenerate pairs.
"""

from dataclasses import dataclass, field
from typing import Optional
import logging
import math

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from absentia.config import get_settings
from absentia.errors import AbsentiaError
from absentia.forms.assembly import HermitianForm, WeightMass, mass_matrix
from absentia.mesh.functions import GridFunction

logger = logging.getLogger(__name__)

DENSE_LIMIT = 64


class SolverError(AbsentiaError):
    """Raised when an eigen-solve cannot be set up or carried out."""


class FactorizationError(SolverError):
    """Raised when every shift tried leaves H − σM singular."""

    def __init__(self, shifts: list[float], detail: str = ""):
        self.shifts = list(shifts)
        tried = ", ".join(f"{s:.6g}" for s in self.shifts)
        super().__init__(f"factorization failed for shifts [{tried}]: {detail}")


class InvalidPencilError(SolverError, ValueError):
    """Raised for ill-posed inputs such as a negative weight."""


class _SingularShift(RuntimeError):
    pass


@dataclass
class SpectralResult:
    """Lowest eigenpairs with their residuals and solver diagnostics."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    residual_norms: np.ndarray
    iterations: int
    converged: bool
    shifts: list[float] = field(default_factory=list)
    seed: int = 0
    grid: Optional[object] = None

    def eigenfunction(self, index: int = 0) -> GridFunction:
        if self.grid is None:
            raise SolverError("result has no grid; use .vectors")
        vector = self.vectors[:, index]
        return GridFunction.from_unknowns(vector, self.grid)  # type: ignore[arg-type]

    def as_dict(self) -> dict:
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "residual_norms": self.residual_norms.tolist(),
            "iterations": self.iterations,
            "converged": self.converged,
            "shifts": list(self.shifts),
            "seed": self.seed,
        }


@dataclass
class SubordinationConstant:
    """c = sup (Σ w|ψ|²)/K[ψ] with b = √c and its diagnostics."""

    value: float
    iterations: int
    converged: bool
    method: str
    support_size: int
    shifts: list[float] = field(default_factory=list)

    @property
    def b_value(self) -> float:
        return math.sqrt(max(self.value, 0.0))

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "b_value": self.b_value,
            "iterations": self.iterations,
            "converged": self.converged,
            "method": self.method,
            "support_size": self.support_size,
        }


@dataclass
class QuotientMinimum:
    """inf K[ψ]/Σ w|ψ|² with the minimizer when available."""

    value: float
    iterations: int
    converged: bool
    method: str
    vector: Optional[np.ndarray] = None


def _rng_vector(n: int, seed: int, complex_: bool) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    if complex_:
        v = v + 1j * rng.standard_normal(n)
    return v


def _lower_bound(h: sp.csr_matrix, m_diag: np.ndarray) -> float:
    """Gershgorin-type bound min_i (h_ii − Σ_{j≠i}|h_ij|)/m_i."""
    diag = np.real(h.diagonal())
    off = np.asarray(abs(h).sum(axis=1)).ravel() - np.abs(diag)
    return float(np.min((diag - off) / m_diag))


def _factorize(
    matrix: sp.csr_matrix, m: sp.csr_matrix, sigma0: float, retries: int
) -> tuple[spla.SuperLU, float, list[float]]:
    """LU of H − σM, pushing σ downward while the factorization is singular."""
    step = 1e-2 * (1.0 + abs(sigma0))
    shifts: list[float] = []
    lu = None
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(retries),
            retry=retry_if_exception_type(_SingularShift),
            reraise=True,
        ):
            with attempt:
                n = attempt.retry_state.attempt_number
                sigma = sigma0 - step * (2 ** (n - 1) - 1)
                shifts.append(sigma)
                try:
                    lu = spla.splu((matrix - sigma * m).tocsc())
                except RuntimeError as e:
                    logger.warning(f"Shift σ={sigma:.6g} is singular, retrying lower")
                    raise _SingularShift(str(e)) from e
    except _SingularShift as e:
        raise FactorizationError(shifts, str(e)) from e
    return lu, shifts[-1], shifts


def _residuals(
    h: sp.csr_matrix, m_diag: np.ndarray, lam: np.ndarray, vecs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    hv = h @ vecs
    res = hv - (m_diag[:, None] * vecs) * lam[None, :]
    norms = np.linalg.norm(vecs, axis=0)
    return np.linalg.norm(res, axis=0) / norms, np.linalg.norm(hv, axis=0) / norms


def _rayleigh_ritz(
    h: sp.csr_matrix, m_diag: np.ndarray, basis: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    q, _ = np.linalg.qr(basis)
    hq = q.conj().T @ (h @ q)
    mq = q.conj().T @ (m_diag[:, None] * q)
    lam, y = la.eigh((hq + hq.conj().T) / 2.0, (mq + mq.conj().T) / 2.0)
    return lam, q @ y


def smallest_eigs(
    h: HermitianForm,
    m: Optional[WeightMass] = None,
    k: int = 1,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    seed: Optional[int] = None,
    sigma: Optional[float] = None,
) -> SpectralResult:
    """Lowest k eigenpairs of H v = λ M v.

    Args:
        h: Hermitian form, bounded below
        m: Positive diagonal mass; the grid's quadrature mass by default
        k: Number of eigenpairs
        tol: Residual tolerance; ‖Hv − λMv‖ ≤ tol(‖Hv‖ + 1) per unit vector
        max_iter: Krylov iteration cap
        seed: Seed of the start vector
        sigma: Shift; a Gershgorin lower bound minus a margin by default

    Returns:
        SpectralResult, with converged=False and partial pairs when ARPACK
        stops early

    Raises:
        FactorizationError: If H − σM stays singular after all retries
    """
    settings = get_settings().solver
    tol = settings.tol if tol is None else tol
    max_iter = settings.max_iter if max_iter is None else max_iter
    seed = settings.seed if seed is None else seed

    if m is None:
        if h.grid is None:
            m_diag = np.ones(h.dimension)
        else:
            m_diag = mass_matrix(h.grid).diagonal
    else:
        m_diag = np.real(np.asarray(m.diagonal, dtype=complex))
    if m_diag.size != h.dimension:
        raise InvalidPencilError(f"mass has size {m_diag.size}, form has {h.dimension}")
    if np.any(m_diag <= 0):
        raise InvalidPencilError("mass must be positive on every unknown")
    n = h.dimension
    if not 1 <= k < n:
        raise InvalidPencilError(f"k must be in [1, {n - 1}], got {k}")

    matrix = h.matrix.real.astype(float) if h.is_real else h.matrix.astype(complex)
    m_mat = sp.diags(m_diag, format="csr")

    if n <= max(DENSE_LIMIT, 2 * k + 2):
        lam, vecs = la.eigh(matrix.toarray(), np.diag(m_diag), subset_by_index=[0, k - 1])
        res, scale = _residuals(matrix, m_diag, lam, vecs)
        converged = bool(np.all(res <= tol * (scale + 1.0)))
        return SpectralResult(lam, vecs, res, 0, converged, [], seed, h.grid)

    if sigma is None:
        lb = _lower_bound(matrix, m_diag)
        sigma = lb - 1e-2 * (1.0 + abs(lb))
    lu, sigma, shifts = _factorize(matrix, m_mat, sigma, settings.shift_retries)

    count = {"matvec": 0}

    def matvec(x: np.ndarray) -> np.ndarray:
        count["matvec"] += 1
        return lu.solve(m_diag * x)

    op = spla.LinearOperator(shape=(n, n), matvec=matvec, dtype=matrix.dtype)
    v0 = _rng_vector(n, seed, np.iscomplexobj(matrix.data))
    if not np.iscomplexobj(matrix.data):
        v0 = v0.real

    converged = True
    try:
        mu, basis = spla.eigs(
            op, k=k, which="LM", v0=v0, tol=tol * 1e-2, maxiter=max_iter,
            ncv=min(n - 1, max(2 * k + 1, 40)),
        )
    except spla.ArpackNoConvergence as e:
        logger.warning(f"ARPACK stopped after {count['matvec']} applications: {e}")
        converged = False
        mu, basis = e.eigenvalues, e.eigenvectors
        if basis is None or len(mu) == 0:
            return SpectralResult(
                np.array([]),
                np.zeros((n, 0)),
                np.array([]),
                count["matvec"],
                False,
                shifts,
                seed,
                h.grid,
            )

    order = np.argsort(np.real(1.0 / mu + sigma))
    basis = basis[:, order]
    if not np.iscomplexobj(matrix.data):
        # Arnoldi vectors carry arbitrary complex phases
        basis = _real_span(basis)
    lam, vecs = _rayleigh_ritz(matrix, m_diag, basis)
    lam, vecs = lam[:k], vecs[:, :k]
    res, scale = _residuals(matrix, m_diag, lam, vecs)
    converged = converged and bool(np.all(res <= tol * (scale + 1.0)))
    if not converged:
        logger.warning(f"Residuals {res.max():.2e} exceed tolerance {tol:.1e}")
    logger.debug(f"smallest_eigs: λ={lam.tolist()} after {count['matvec']} applications")
    return SpectralResult(lam, vecs, res, count["matvec"], converged, shifts, seed, h.grid)


def _real_span(basis: np.ndarray) -> np.ndarray:
    return np.hstack([basis.real, basis.imag])


def sup_rayleigh(
    w: WeightMass,
    k: HermitianForm,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    seed: Optional[int] = None,
    dense_threshold: Optional[int] = None,
) -> SubordinationConstant:
    """c = sup Σ w|ψ|² / K[ψ] over the unknowns, K positive definite.

    Only the support S of w matters: c is the largest eigenvalue of
    D_S (K⁻¹)_SS D_S with D = diag(√w). Small supports are solved densely,
    larger ones by Lanczos on that operator.

    Raises:
        InvalidPencilError: If w has a negative entry
        FactorizationError: If K is singular
    """
    settings = get_settings().solver
    tol = settings.tol if tol is None else tol
    max_iter = settings.max_iter if max_iter is None else max_iter
    seed = settings.seed if seed is None else seed
    dense_threshold = settings.dense_threshold if dense_threshold is None else dense_threshold

    diag = np.real(np.asarray(w.diagonal, dtype=complex))
    if diag.size != k.dimension:
        raise InvalidPencilError(f"weight has size {diag.size}, form has {k.dimension}")
    if np.any(diag < 0):
        raise InvalidPencilError(f"weight '{w.label}' is negative; sup_rayleigh needs w ≥ 0")
    support = np.flatnonzero(diag)
    if support.size == 0:
        return SubordinationConstant(0.0, 0, True, "zero_weight", 0)

    try:
        lu = spla.splu(k.matrix.tocsc())
    except RuntimeError as e:
        raise FactorizationError([0.0], f"form '{k.label}' is singular: {e}") from e

    d = np.sqrt(diag[support])
    n = k.dimension
    dtype = complex if not k.is_real else float

    if support.size <= dense_threshold:
        rhs = np.zeros((n, support.size), dtype=dtype)
        rhs[support, np.arange(support.size)] = 1.0
        x = lu.solve(rhs)[support, :]
        t = d[:, None] * x * d[None, :]
        value = float(la.eigvalsh((t + t.conj().T) / 2.0)[-1])
        return SubordinationConstant(value, support.size, True, "dense", int(support.size))

    count = {"matvec": 0}

    def matvec(y: np.ndarray) -> np.ndarray:
        count["matvec"] += 1
        full = np.zeros(n, dtype=np.result_type(dtype, y.dtype))
        full[support] = d * np.ravel(y)
        return d * lu.solve(full)[support]

    op = spla.LinearOperator(shape=(support.size, support.size), matvec=matvec, dtype=dtype)
    v0 = _rng_vector(support.size, seed, dtype is complex)
    converged = True
    try:
        vals = spla.eigsh(op, k=1, which="LA", v0=v0, tol=tol * 1e-2, maxiter=max_iter,
                          return_eigenvectors=False)
        value = float(np.max(np.real(vals)))
    except spla.ArpackNoConvergence as e:
        converged = False
        value = float(np.max(np.real(e.eigenvalues))) if len(e.eigenvalues) else math.nan
        logger.warning(
            f"sup_rayleigh[{w.label}] did not converge after {count['matvec']} applications"
        )
    return SubordinationConstant(value, count["matvec"], converged, "lanczos", int(support.size))


def min_rayleigh(
    k: HermitianForm,
    w: WeightMass,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    seed: Optional[int] = None,
) -> QuotientMinimum:
    """inf K[ψ] / Σ w|ψ|², the sharp constant of a Hardy-type probe."""
    if np.all(np.real(w.diagonal) > 0):
        result = smallest_eigs(k, w, k=1, tol=tol, max_iter=max_iter, seed=seed)
        if result.eigenvalues.size == 0:
            return QuotientMinimum(math.nan, result.iterations, False, "shift_invert")
        return QuotientMinimum(
            float(result.eigenvalues[0]),
            result.iterations,
            result.converged,
            "shift_invert",
            result.vectors[:, 0],
        )
    sup = sup_rayleigh(w, k, tol=tol, max_iter=max_iter, seed=seed)
    value = math.inf if sup.value == 0 else 1.0 / sup.value
    return QuotientMinimum(value, sup.iterations, sup.converged, f"inverse_{sup.method}")


def participation_radius(psi: GridFunction) -> float:
    """√(∫r²|ψ|² / ∫|ψ|²) with the grid's quadrature."""
    grid = psi.grid
    density = grid.quad_weights * psi.abs2()
    total = float(np.sum(density))
    if total == 0:
        raise SolverError("participation radius of the zero function")
    return math.sqrt(float(np.sum(grid.node_r**2 * density)) / total)
