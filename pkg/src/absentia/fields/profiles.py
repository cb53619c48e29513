"""Radial magnetic field profiles and their flux functions."""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence
import logging
import math

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from absentia.errors import AbsentiaError

logger = logging.getLogger(__name__)


class FieldModelError(AbsentiaError, ValueError):
    """Raised when a field or potential violates its construction invariants."""

    def __init__(self, message: str, name: Optional[str] = None):
        self.name = name
        prefix = f"[{name}] " if name else ""
        super().__init__(f"{prefix}{message}")


@dataclass(frozen=True)
class FieldPiece:
    """Polynomial B(r) on the interval [start, stop)."""

    start: float
    stop: float
    poly: Polynomial

    def contains(self, r: np.ndarray, closed: bool = False) -> np.ndarray:
        upper = r <= self.stop if closed else r < self.stop
        return (r >= self.start) & upper


@dataclass(frozen=True)
class RadialFieldProfile:
    """Piecewise-polynomial radial magnetic field B(r).

    The pieces partition [0, support_radius); B vanishes beyond. The last
    finite piece is closed on the right, so a step 1_{r<=r0} includes r0.
    """

    pieces: tuple[FieldPiece, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        expected = 0.0
        for piece in self.pieces:
            if piece.start != expected:
                raise FieldModelError(
                    f"pieces must partition [0, R): gap or overlap at r={expected}", self.name
                )
            if not piece.stop > piece.start:
                raise FieldModelError(f"empty piece [{piece.start}, {piece.stop})", self.name)
            if not np.all(np.isfinite(piece.poly.coef)):
                raise FieldModelError("non-finite polynomial coefficients", self.name)
            expected = piece.stop

    @property
    def support_radius(self) -> float:
        return self.pieces[-1].stop if self.pieces else 0.0

    @property
    def is_zero(self) -> bool:
        return all(not np.any(p.poly.coef) for p in self.pieces)

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        last = len(self.pieces) - 1
        for index, piece in enumerate(self.pieces):
            closed = index == last and math.isfinite(piece.stop)
            mask = piece.contains(r, closed=closed)
            if np.any(mask):
                out[mask] = piece.poly(r[mask])
        return out

    def sign(self, samples_per_piece: int = 257) -> int:
        """Return +1 / -1 if B has one sign on its support, 0 otherwise."""
        values = []
        for piece in self.pieces:
            stop = piece.stop if math.isfinite(piece.stop) else piece.start + 1.0
            values.append(piece.poly(np.linspace(piece.start, stop, samples_per_piece)))
        if not values:
            return 0
        b = np.concatenate(values)
        if np.all(b >= 0) and np.any(b > 0):
            return 1
        if np.all(b <= 0) and np.any(b < 0):
            return -1
        return 0

    @classmethod
    def zero(cls) -> "RadialFieldProfile":
        return cls(pieces=(), name="zero")

    @classmethod
    def step(cls, b0: float, r0: float) -> "RadialFieldProfile":
        """B = b0 on r <= r0, zero outside."""
        if not r0 > 0:
            raise FieldModelError(f"step radius must be positive, got {r0}", "step")
        return cls(
            pieces=(FieldPiece(0.0, r0, Polynomial([b0], domain=[0.0, r0], window=[0.0, r0])),),
            name="step",
        )

    @classmethod
    def constant(cls, b: float) -> "RadialFieldProfile":
        """Homogeneous field b on the whole plane."""
        return cls(pieces=(FieldPiece(0.0, math.inf, Polynomial([b])),), name="constant")

    @classmethod
    def gaussian_poly(
        cls,
        b0: float = 1.0,
        width: float = 1.0,
        r_cut: float = 6.0,
        degree: int = 12,
        n_pieces: int = 8,
    ) -> "RadialFieldProfile":
        """Piecewise Chebyshev interpolant of b0·exp(-(r/width)²) cut at r_cut."""
        profile = cls.from_function(
            lambda r: b0 * np.exp(-((r / width) ** 2)),
            np.linspace(0.0, r_cut, n_pieces + 1),
            degree,
        )
        return cls(pieces=profile.pieces, name="gaussian_poly")

    @classmethod
    def from_function(
        cls,
        f: Callable[[np.ndarray], np.ndarray],
        breaks: Sequence[float],
        degree: int,
    ) -> "RadialFieldProfile":
        """Tabulate f as one interpolating polynomial per interval of `breaks`.

        Raises:
            FieldModelError: If f is not finite on the pieces (r·B not locally integrable)
        """
        edges = np.asarray(breaks, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or edges[0] != 0.0 or np.any(np.diff(edges) <= 0):
            raise FieldModelError("breaks must start at 0 and increase strictly", "tabulated")

        pieces = []
        for a, b in zip(edges[:-1], edges[1:]):
            with np.errstate(divide="ignore", invalid="ignore"):
                endpoint_values = np.asarray(f(np.array([a, b])), dtype=float)
            if not np.all(np.isfinite(endpoint_values)):
                raise FieldModelError(
                    f"B is not finite on [{a}, {b}]: r·B is not locally integrable", "tabulated"
                )
            cheb = Chebyshev.interpolate(f, degree, domain=[a, b])
            pieces.append(FieldPiece(float(a), float(b), cheb.convert(kind=Polynomial)))
        return cls(pieces=tuple(pieces), name="tabulated")


@dataclass(frozen=True)
class _FluxPiece:
    start: float
    stop: float
    offset: float
    antiderivative: Polynomial
    density: Polynomial


@dataclass(frozen=True)
class FluxFunction:
    """Φ_B(r) = ∫₀^r B(s) s ds, exact per polynomial piece."""

    profile: RadialFieldProfile
    _pieces: tuple[_FluxPiece, ...]
    _total: float

    @property
    def total_flux(self) -> Optional[float]:
        """Limit of Φ_B at infinity; None when it does not exist."""
        if math.isfinite(self.profile.support_radius):
            return self._total
        return 0.0 if self.profile.is_zero else None

    def __call__(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.full_like(r, self._total)
        for piece in self._pieces:
            mask = (r >= piece.start) & (r < piece.stop)
            if np.any(mask):
                out[mask] = piece.offset + piece.antiderivative(r[mask])
        return out

    def derivative(self, r: np.ndarray) -> np.ndarray:
        """Φ_B′(r), which equals r·B(r) inside every piece."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for piece in self._pieces:
            mask = (r >= piece.start) & (r < piece.stop)
            if np.any(mask):
                out[mask] = piece.density(r[mask])
        return out

    def over_r(self, r: np.ndarray) -> np.ndarray:
        """Φ_B(r)/r, continued by 0 at the origin."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r > 0, self(r) / np.where(r > 0, r, 1.0), 0.0)

    def over_r2(self, r: np.ndarray) -> np.ndarray:
        """Φ_B(r)/r², continued by B(0)/2 at the origin."""
        r = np.asarray(r, dtype=float)
        limit = float(self.profile(np.array([0.0]))[0]) / 2.0
        with np.errstate(divide="ignore", invalid="ignore"):
            safe = np.where(r > 0, r, 1.0)
            return np.where(r > 0, self(r) / safe**2, limit)


def flux_profile(field: RadialFieldProfile) -> FluxFunction:
    """Build the flux function of a radial field.

    Args:
        field: Validated radial profile

    Returns:
        FluxFunction with Φ_B(0) = 0 and Φ_B′ = r·B inside pieces
    """
    pieces = []
    offset = 0.0
    for piece in field.pieces:
        s = Polynomial.identity(domain=piece.poly.domain, window=piece.poly.window)
        density = piece.poly * s
        antiderivative = density.integ(lbnd=piece.start)
        pieces.append(_FluxPiece(piece.start, piece.stop, offset, antiderivative, density))
        if math.isfinite(piece.stop):
            offset += float(antiderivative(piece.stop))
    logger.debug(f"Flux of '{field.name}': {len(pieces)} pieces, total {offset:.6g}")
    return FluxFunction(profile=field, _pieces=tuple(pieces), _total=offset)
