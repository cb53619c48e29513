"""Quadrature residuals of the multiplier identities on manufactured pairs.

Every identity is written as LHS = RHS with each side a sum of named
plane integrals. For a radial profile f and e^{iℓθ} dependence the
integrands reduce to functions of r, so one trapezoid rule in r (times
2π) evaluates all of them.
"""

from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Union
import logging
import math

import numpy as np

from absentia.errors import AbsentiaError
from absentia.forms.assembly import assemble_dirichlet_form, mass_matrix, potential_mass
from absentia.identities.manufactured import Decomposition, ManufacturedEigenpair, SplitSpec
from absentia.mesh.functions import GridFunction
from absentia.mesh.grid import PolarGrid, RadialRule, integrate_radial

logger = logging.getLogger(__name__)

DEFAULT_N_R = 8192
SPLIT_RESOLUTION = 2.5
RESIDUAL_FLOOR = 1e-10
ORIGIN_CLAMP = 1e-150
DENOMINATOR_GUARD = 1e-30

Integrands = dict[str, np.ndarray]


class IdentityError(AbsentiaError, ValueError):
    """Raised when an identity cannot be evaluated for the given pair or multiplier."""


@dataclass(frozen=True)
class RadialMultiplier:
    """Radial multiplier G(r) with its first two derivatives."""

    g: Callable[[np.ndarray], np.ndarray]
    dg: Callable[[np.ndarray], np.ndarray]
    d2g: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "custom"

    @classmethod
    def one(cls) -> "RadialMultiplier":
        return cls(np.ones_like, np.zeros_like, np.zeros_like, "one")

    @classmethod
    def r(cls) -> "RadialMultiplier":
        return cls(lambda r: np.asarray(r, dtype=float), np.ones_like, np.zeros_like, "r")


MultiplierChoice = Union[Literal["one", "r"], RadialMultiplier]


def _multiplier(choice: MultiplierChoice) -> RadialMultiplier:
    if isinstance(choice, RadialMultiplier):
        return choice
    if choice == "one":
        return RadialMultiplier.one()
    if choice == "r":
        return RadialMultiplier.r()
    raise IdentityError(f"Unknown multiplier: {choice}")


@dataclass
class IdentityResidualEntry:
    """One identity evaluated on one pair: every term, both sides, the residual."""

    identity: str
    choice: str
    lhs_terms: dict[str, float]
    rhs_terms: dict[str, float]
    n_r: int
    order: float = math.nan
    note: str = ""

    @property
    def lhs(self) -> float:
        return float(sum(self.lhs_terms.values()))

    @property
    def rhs(self) -> float:
        return float(sum(self.rhs_terms.values()))

    @property
    def absolute(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def relative(self) -> float:
        return self.absolute / (abs(self.lhs) + abs(self.rhs) + DENOMINATOR_GUARD)

    def as_dict(self) -> dict:
        return {
            "identity": self.identity,
            "choice": self.choice,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "absolute_residual": self.absolute,
            "relative_residual": self.relative,
            "n_r": self.n_r,
            "order": None if math.isnan(self.order) else self.order,
            "note": self.note,
        }


@dataclass
class IdentityResidualReport:
    """All identity entries evaluated on one manufactured pair."""

    pair: str
    entries: list[IdentityResidualEntry] = field(default_factory=list)
    discrete_residual: Optional[float] = None

    @property
    def worst_relative(self) -> float:
        return max((e.relative for e in self.entries), default=0.0)

    def as_dict(self) -> dict:
        return {
            "pair": self.pair,
            "entries": [e.as_dict() for e in self.entries],
            "worst_relative_residual": self.worst_relative,
            "discrete_residual": self.discrete_residual,
        }


@dataclass(frozen=True)
class _Profile:
    """Radial data of a pair on the quadrature nodes."""

    r: np.ndarray
    f: np.ndarray
    df: np.ndarray
    grad2: np.ndarray
    v: np.ndarray
    b: np.ndarray
    kappa_r: np.ndarray


def _profile(pair: ManufacturedEigenpair, r: np.ndarray) -> _Profile:
    """Evaluate f, f′, |∇_A u|², V and B at max(r, tiny) so origin terms take their limits."""
    rs = np.maximum(r, ORIGIN_CLAMP)
    f, df = pair.mode.f(rs), pair.mode.df(rs)
    kappa = pair.kappa(rs)
    return _Profile(
        r=rs,
        f=f,
        df=df,
        grad2=df**2 + (kappa * f) ** 2,
        v=pair.potential(rs),
        b=pair.field(rs),
        kappa_r=kappa * rs,
    )


def _integrate(rule: RadialRule, r: np.ndarray, terms: Integrands) -> dict[str, float]:
    return {name: integrate_radial(rule, values * r) for name, values in terms.items()}


def _resolution(pair: ManufacturedEigenpair, n_r: Optional[int], split: Optional[SplitSpec]) -> int:
    n = n_r or DEFAULT_N_R
    if split is not None and split.kind is Decomposition.SPLIT:
        needed = SPLIT_RESOLUTION * pair.mode.working_radius() / split.width
        n = max(n, 2 ** math.ceil(math.log2(needed)))
    return n


def _evaluate(
    pair: ManufacturedEigenpair,
    identity: str,
    choice: str,
    integrands: Callable[[_Profile], tuple[Integrands, Integrands]],
    n_r: int,
    note: str = "",
) -> IdentityResidualEntry:
    """Evaluate at n_r and 2·n_r; the entry keeps the coarse values and the observed order."""
    radius = pair.mode.working_radius()
    entries = []
    for n in (n_r, 2 * n_r):
        rule = RadialRule.build(radius, n)
        data = _profile(pair, rule.nodes)
        lhs, rhs = integrands(data)
        entries.append(
            IdentityResidualEntry(
                identity=identity,
                choice=choice,
                lhs_terms=_integrate(rule, data.r, lhs),
                rhs_terms=_integrate(rule, data.r, rhs),
                n_r=n,
                note=note,
            )
        )
    coarse, fine = entries
    coarse.order = _order(coarse.absolute, fine.absolute)
    logger.debug(
        f"{identity}[{choice}] n_r={n_r}: relative residual {coarse.relative:.3e}, "
        f"order {coarse.order:.2f}"
    )
    return coarse


def _order(coarse: float, fine: float) -> float:
    if fine <= RESIDUAL_FLOOR or coarse <= RESIDUAL_FLOOR:
        return math.nan
    return math.log2(coarse / fine)


def residual_G1(
    pair: ManufacturedEigenpair, choice: MultiplierChoice = "one", n_r: Optional[int] = None
) -> IdentityResidualEntry:
    """Reλ∫G|u|² − ∫G|∇_A u|² + ½∫ΔG|u|² = ∫G ReV|u|².

    Raises:
        IdentityError: If a custom multiplier has no second derivative
    """
    g = _multiplier(choice)
    if g.d2g is None:
        raise IdentityError(f"multiplier '{g.name}' needs a second derivative for ΔG")

    def integrands(p: _Profile) -> tuple[Integrands, Integrands]:
        gr, f2 = g.g(p.r), p.f**2
        # ΔG·r = G″r + G′, kept finite at the origin
        laplacian_r = g.d2g(p.r) * p.r + g.dg(p.r)  # type: ignore[misc]
        lhs = {
            "re_lambda_mass": pair.lam * gr * f2,
            "gradient": -gr * p.grad2,
            "laplacian": 0.5 * laplacian_r * f2 / p.r,
        }
        return lhs, {"potential": gr * p.v * f2}

    return _evaluate(pair, "G1", g.name, integrands, _resolution(pair, n_r, None))


def residual_G2(
    pair: ManufacturedEigenpair, choice: MultiplierChoice = "r", n_r: Optional[int] = None
) -> IdentityResidualEntry:
    """Imλ∫G|u|² − Im∫∇G·ū∇_A u − ∫G ImV|u|² = 0.

    Manufactured pairs have real λ and V, and ū∂_r u = f f′ is real, so every
    term vanishes; the middle one is still computed from ū∂_r^A u.
    """
    g = _multiplier(choice)

    def integrands(p: _Profile) -> tuple[Integrands, Integrands]:
        u_bar_dr_u = np.conj(p.f.astype(complex)) * p.df
        lhs = {
            "im_lambda_mass": np.zeros_like(p.r),
            "flux_term": -g.dg(p.r) * np.imag(u_bar_dr_u),
            "im_potential": np.zeros_like(p.r),
        }
        return lhs, {}

    return _evaluate(pair, "G2", g.name, integrands, _resolution(pair, n_r, None))


def residual_G3(pair: ManufacturedEigenpair, n_r: Optional[int] = None) -> IdentityResidualEntry:
    """The |x|² multiplier identity.

    With ∇²G = 2·Id and Δ²G = 0 it reads
    2∫|∇_A u|² − 2∫B(ℓ+Φ)|u|² = −2∫V|u|² − 2∫rV f f′,
    the second left term being the field coupling of the angular current.
    """

    def integrands(p: _Profile) -> tuple[Integrands, Integrands]:
        f2 = p.f**2
        lhs = {
            "hessian": 2.0 * p.grad2,
            "bilaplacian": np.zeros_like(p.r),
            "field": -2.0 * p.b * p.kappa_r * f2,
        }
        rhs = {
            "potential": -2.0 * p.v * f2,
            "radial_potential": -2.0 * p.r * p.v * p.f * p.df,
        }
        return lhs, rhs

    return _evaluate(pair, "G3", "|x|^2", integrands, _resolution(pair, n_r, None))


def _split(decomposition: Union[Decomposition, SplitSpec, str]) -> SplitSpec:
    if isinstance(decomposition, SplitSpec):
        return decomposition
    return SplitSpec(kind=Decomposition(decomposition))


def residual_crucial_ss(
    pair: ManufacturedEigenpair,
    decomposition: Union[Decomposition, SplitSpec, str] = Decomposition.ALL_V1,
    n_r: Optional[int] = None,
) -> IdentityResidualEntry:
    """Self-adjoint identity for a decomposition V = V⁽¹⁾ + V⁽²⁾ in two dimensions.

    ∫|∇_A u⁻|² = 2∫B(ℓ+Φ)|u|² + ∫∂_r(rV⁽¹⁾)|u|²
                 − ∫V⁽²⁾|u|² − 2∫rV⁽²⁾f f′,

    where u⁻ = e^{−i√λ r}u, so the left side gains λ∫|u|² for λ > 0.
    A split at r₀ is smoothed over its width and noted in the entry.

    Raises:
        IdentityError: If λ < 0
    """
    if pair.lam < 0:
        raise IdentityError(f"the identity needs λ ≥ 0, got {pair.lam}")
    split = _split(decomposition)

    def integrands(p: _Profile) -> tuple[Integrands, Integrands]:
        f2 = p.f**2
        chi, dchi = split.chi(p.r), split.dchi(p.r)
        v2 = (1.0 - chi) * p.v
        lhs = {"gradient": p.grad2, "lambda_mass": pair.lam * f2}
        rhs = {
            "field": 2.0 * p.b * p.kappa_r * f2,
            "d_rv1": (chi * pair.d_rv(p.r) + p.r * p.v * dchi) * f2,
            "v2": -v2 * f2,
            "radial_v2": -2.0 * p.r * v2 * p.f * p.df,
        }
        return lhs, rhs

    note = split.note if split.kind is Decomposition.SPLIT else ""
    return _evaluate(
        pair, "crucial_ss", split.kind.value, integrands, _resolution(pair, n_r, split), note
    )


def phase_shift(u: GridFunction, lam: complex, sign_at_zero: int = 0) -> GridFunction:
    """u⁻ = e^{−i·sgn(Imλ)·(Reλ)^{1/2}·r}·u, with sgn(0) = sign_at_zero.

    Raises:
        IdentityError: If Reλ < 0
    """
    lam = complex(lam)
    if lam.real < 0:
        raise IdentityError(f"phase shift needs Reλ ≥ 0, got {lam}")
    sign = int(np.sign(lam.imag)) if lam.imag != 0 else sign_at_zero
    if sign == 0:
        return u
    phase = np.exp(-1j * sign * math.sqrt(lam.real) * u.grid.node_r)
    return u.with_values(u.values * phase)


def complex_lambda_terms(
    pair: ManufacturedEigenpair, lam: complex, n_r: Optional[int] = None
) -> dict[str, float]:
    """Terms multiplied by |Imλ|/(Reλ)^{1/2} in the complex-λ identity, for reporting only.

    Raises:
        IdentityError: If Reλ ≤ 0
    """
    lam = complex(lam)
    if lam.real <= 0:
        raise IdentityError(f"complex-λ terms need Reλ > 0, got {lam}")
    factor = abs(lam.imag) / math.sqrt(lam.real)
    sign2 = 1.0 if lam.imag != 0 else 0.0
    rule = RadialRule.build(pair.mode.working_radius(), n_r or DEFAULT_N_R)
    p = _profile(pair, rule.nodes)
    f2 = p.f**2
    terms = _integrate(
        rule,
        p.r,
        {
            "weighted_gradient": p.r * (p.grad2 + sign2 * lam.real * f2),
            "hardy": -0.5 * f2 / p.r,
            "weighted_potential": p.r * p.v * f2,
        },
    )
    terms = {name: factor * value for name, value in terms.items()}
    terms["total"] = float(sum(terms.values()))
    return terms


def discrete_residual(pair: ManufacturedEigenpair, grid: PolarGrid) -> float:
    """‖(H_h − λM)u_h‖/‖M u_h‖ for the sampled pair, a discretization diagnostic."""
    u = pair.sample(grid)
    h = assemble_dirichlet_form(pair.potential_field, grid).plus(
        potential_mass(pair.potential, grid, label="V_derived")
    )
    mass = mass_matrix(grid)
    mu = mass.diagonal * u.unknowns
    norm = float(np.linalg.norm(mu))
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(h.apply(u) - pair.lam * mu) / norm)


def refinement_order(residual: Callable[[int], float], n: int) -> float:
    """log₂(res(n)/res(2n)); NaN once the finer residual reaches the floor."""
    return _order(residual(n), residual(2 * n))
