"""Radial electric potentials and their decomposition V = V⁽¹⁾ + V⁽²⁾ + i Im V."""

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional
import logging

import numpy as np

from absentia.fields.profiles import FieldModelError

logger = logging.getLogger(__name__)

RadialFunction = Callable[[np.ndarray], np.ndarray]

DERIVATIVE_STEP = 1e-5


@dataclass(frozen=True)
class PotentialTerm:
    """One named radial term with its optional analytic ∂_r(rV)."""

    kind: str
    params: Mapping[str, float]
    value: RadialFunction
    d_rv: Optional[RadialFunction] = None
    differentiable: bool = True
    compact: bool = False

    def __call__(self, r: np.ndarray) -> np.ndarray:
        return self.value(np.asarray(r, dtype=float))

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @classmethod
    def zero(cls) -> "PotentialTerm":
        return cls(
            kind="zero",
            params={},
            value=lambda r: np.zeros_like(r),
            d_rv=lambda r: np.zeros_like(r),
            compact=True,
        )

    @classmethod
    def step(cls, height: float, radius: float) -> "PotentialTerm":
        """height·1_{r<=radius}; not differentiable at the jump."""
        if not radius > 0:
            raise FieldModelError(f"step radius must be positive, got {radius}", "step")
        return cls(
            kind="step",
            params={"height": height, "radius": radius},
            value=lambda r: np.where(r <= radius, height, 0.0),
            differentiable=False,
            compact=True,
        )

    @classmethod
    def well(cls, depth: float, radius: float) -> "PotentialTerm":
        """−depth·1_{r<=radius}."""
        term = cls.step(-depth, radius)
        return cls(
            kind="well",
            params={"depth": depth, "radius": radius},
            value=term.value,
            differentiable=False,
            compact=True,
        )

    @classmethod
    def gaussian(cls, amplitude: float, width: float) -> "PotentialTerm":
        """amplitude·exp(−(r/width)²)."""
        if not width > 0:
            raise FieldModelError(f"gaussian width must be positive, got {width}", "gaussian")

        def value(r: np.ndarray) -> np.ndarray:
            return amplitude * np.exp(-((r / width) ** 2))

        def d_rv(r: np.ndarray) -> np.ndarray:
            return value(r) * (1.0 - 2.0 * (r / width) ** 2)

        return cls(
            kind="gaussian",
            params={"amplitude": amplitude, "width": width},
            value=value,
            d_rv=d_rv,
        )

    @classmethod
    def power(cls, coefficient: float, exponent: float) -> "PotentialTerm":
        """coefficient·r^exponent; singular at the origin for negative exponents."""

        def value(r: np.ndarray) -> np.ndarray:
            with np.errstate(divide="ignore"):
                return coefficient * np.power(r, exponent)

        def d_rv(r: np.ndarray) -> np.ndarray:
            with np.errstate(divide="ignore"):
                return coefficient * (exponent + 1.0) * np.power(r, exponent)

        return cls(
            kind="power",
            params={"coefficient": coefficient, "exponent": exponent},
            value=value,
            d_rv=d_rv,
        )

    @classmethod
    def from_function(
        cls,
        value: RadialFunction,
        d_rv: Optional[RadialFunction] = None,
        kind: str = "custom",
    ) -> "PotentialTerm":
        return cls(kind=kind, params={}, value=value, d_rv=d_rv)


def _sum(terms: Iterable[PotentialTerm], r: np.ndarray) -> np.ndarray:
    out = np.zeros_like(r)
    for term in terms:
        out = out + term(r)
    return out


@dataclass(frozen=True)
class PotentialModel:
    """Radial potential with its decomposition into V⁽¹⁾, V⁽²⁾ and Im V.

    Terms in ``undecided`` have not been assigned to a part yet; constant
    computations refuse a model that still carries them.
    """

    v1: tuple[PotentialTerm, ...] = ()
    v2: tuple[PotentialTerm, ...] = ()
    im: tuple[PotentialTerm, ...] = ()
    undecided: tuple[PotentialTerm, ...] = ()
    decomposition_note: str = "supplied"
    extra: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for term in self.v1:
            if not term.differentiable:
                raise FieldModelError(
                    f"term '{term.kind}' is not differentiable; place it in V2 or Im V", "v1"
                )

    @property
    def is_real(self) -> bool:
        return all(term.is_zero for term in self.im)

    @property
    def is_decided(self) -> bool:
        return not self.undecided

    @property
    def derivative_method(self) -> str:
        if all(term.d_rv is not None for term in self.v1):
            return "analytic"
        return "central_difference"

    def v1_values(self, r: np.ndarray) -> np.ndarray:
        return _sum(self.v1, np.asarray(r, dtype=float))

    def v2_values(self, r: np.ndarray) -> np.ndarray:
        return _sum(self.v2, np.asarray(r, dtype=float))

    def re_values(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self.v1_values(r) + self.v2_values(r) + _sum(self.undecided, r)

    def im_values(self, r: np.ndarray) -> np.ndarray:
        return _sum(self.im, np.asarray(r, dtype=float))

    def d_rv1(self, r: np.ndarray) -> np.ndarray:
        """∂_r(rV⁽¹⁾), analytic when every term supplies it."""
        r = np.asarray(r, dtype=float)
        if self.derivative_method == "analytic":
            out = np.zeros_like(r)
            for term in self.v1:
                out = out + term.d_rv(r)
            return out
        h = DERIVATIVE_STEP * (1.0 + r)
        left = np.maximum(r - h, 0.0)
        right = r + h
        return (right * self.v1_values(right) - left * self.v1_values(left)) / (right - left)

    def v_plus(self, r: np.ndarray) -> np.ndarray:
        return np.maximum(self.re_values(r), 0.0)

    def v_minus(self, r: np.ndarray) -> np.ndarray:
        return np.maximum(-self.re_values(r), 0.0)

    def d_rv1_plus(self, r: np.ndarray) -> np.ndarray:
        return np.maximum(self.d_rv1(r), 0.0)

    def d_rv1_minus(self, r: np.ndarray) -> np.ndarray:
        return np.maximum(-self.d_rv1(r), 0.0)

    def r2_v2_sq(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return r**2 * self.v2_values(r) ** 2

    def r2_im_sq(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return r**2 * self.im_values(r) ** 2

    def r2_re_minus_sq(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return r**2 * self.v_minus(r) ** 2

    def decided(self, strategy: str) -> "PotentialModel":
        """Resolve undecided terms: "suggested", "all_v1" or "all_v2"."""
        if not self.undecided:
            return self
        if strategy == "suggested":
            model, note = suggest_decomposition(self.undecided)
            v1, v2 = model.v1, model.v2
        elif strategy == "all_v1":
            v1, v2, note = self.undecided, (), "all terms in V1"
        elif strategy == "all_v2":
            v1, v2, note = (), self.undecided, "all terms in V2"
        else:
            raise FieldModelError(f"Unknown decomposition strategy: {strategy}", "potential")
        return PotentialModel(
            v1=self.v1 + tuple(v1),
            v2=self.v2 + tuple(v2),
            im=self.im,
            decomposition_note=note,
        )


def suggest_decomposition(terms: Iterable[PotentialTerm]) -> tuple[PotentialModel, str]:
    """Put smooth decaying terms in V⁽¹⁾ and compactly supported or rough ones in V⁽²⁾."""
    v1, v2 = [], []
    for term in terms:
        if term.is_zero:
            continue
        if term.differentiable and not term.compact:
            v1.append(term)
        else:
            v2.append(term)
    note = (
        f"suggested: V1=[{', '.join(t.kind for t in v1)}] "
        f"V2=[{', '.join(t.kind for t in v2)}]"
    )
    logger.info(f"Potential decomposition {note}")
    return PotentialModel(v1=tuple(v1), v2=tuple(v2), decomposition_note=note), note
