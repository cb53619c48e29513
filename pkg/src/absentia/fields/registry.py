"""Named field profiles and potential terms, resolved from scenario parameters."""

from dataclasses import dataclass
from typing import Any, Callable, Optional
import logging

import numpy as np

from absentia.fields.angular import AngularFluxDensity, flux_distance
from absentia.fields.gauges import VectorPotentialField, ab_potential, transverse_gauge
from absentia.fields.profiles import FieldModelError, FluxFunction, RadialFieldProfile, flux_profile
from absentia.fields.potentials import PotentialTerm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FieldModel:
    """A radial field profile or an Aharonov–Bohm angular flux density."""

    name: str
    profile: Optional[RadialFieldProfile] = None
    alpha: Optional[AngularFluxDensity] = None

    def __post_init__(self) -> None:
        if (self.profile is None) == (self.alpha is None):
            raise FieldModelError("exactly one of profile and alpha must be given", self.name)

    @property
    def is_ab(self) -> bool:
        return self.alpha is not None

    @property
    def flux(self) -> Optional[FluxFunction]:
        return flux_profile(self.profile) if self.profile is not None else None

    @property
    def beta(self) -> float:
        """Distance of the total (or mean) flux to the integers."""
        if self.alpha is not None:
            return self.alpha.flux_distance
        total = self.flux.total_flux
        return flux_distance(total) if total is not None else 0.0

    def magnetic_field(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.profile is None:
            return np.zeros_like(r)
        return self.profile(r)

    def vector_potential(self) -> VectorPotentialField:
        if self.alpha is not None:
            return ab_potential(self.alpha)
        return transverse_gauge(self.profile)


FieldFactory = Callable[..., FieldModel]
TermFactory = Callable[..., PotentialTerm]


def _ab_field(mean: float, cos: tuple[float, ...] = (), sin: tuple[float, ...] = ()) -> FieldModel:
    cos, sin = tuple(cos), tuple(sin)
    width = max(len(cos), len(sin))
    cos += (0.0,) * (width - len(cos))
    sin += (0.0,) * (width - len(sin))
    return FieldModel(
        name="ab", alpha=AngularFluxDensity(mean=mean, cos_coeffs=cos, sin_coeffs=sin)
    )


DEFAULT_FIELD_PROFILES: dict[str, FieldFactory] = {
    "zero": lambda: FieldModel(name="zero", profile=RadialFieldProfile.zero()),
    "step": lambda b0, r0: FieldModel(name="step", profile=RadialFieldProfile.step(b0, r0)),
    "constant": lambda b: FieldModel(name="constant", profile=RadialFieldProfile.constant(b)),
    "gaussian_poly": lambda b0=1.0, width=1.0, r_cut=6.0, degree=12, pieces=8: FieldModel(
        name="gaussian_poly",
        profile=RadialFieldProfile.gaussian_poly(b0, width, r_cut, int(degree), int(pieces)),
    ),
    "ab": _ab_field,
}

DEFAULT_POTENTIAL_TERMS: dict[str, TermFactory] = {
    "zero": PotentialTerm.zero,
    "step": PotentialTerm.step,
    "well": PotentialTerm.well,
    "gaussian": PotentialTerm.gaussian,
    "power": PotentialTerm.power,
}


class ProfileRegistry:
    """Registry of field and potential-term factories by name."""

    def __init__(self):
        self._fields: dict[str, FieldFactory] = dict(DEFAULT_FIELD_PROFILES)
        self._terms: dict[str, TermFactory] = dict(DEFAULT_POTENTIAL_TERMS)

    def field(self, name: str, **params: Any) -> FieldModel:
        """Build a field model by profile name.

        Args:
            name: Profile name (must be registered)
            **params: Profile parameters

        Returns:
            FieldModel instance
        """
        if name not in self._fields:
            raise ValueError(f"Unknown field profile: {name}")
        try:
            return self._fields[name](**params)
        except TypeError as e:
            raise FieldModelError(f"bad parameters {sorted(params)}: {e}", name) from e

    def term(self, kind: str, **params: Any) -> PotentialTerm:
        """Build a potential term by kind."""
        if kind not in self._terms:
            raise ValueError(f"Unknown potential term: {kind}")
        try:
            return self._terms[kind](**params)
        except TypeError as e:
            raise FieldModelError(f"bad parameters {sorted(params)}: {e}", kind) from e

    def register_field(self, name: str, factory: FieldFactory) -> None:
        self._fields[name] = factory
        logger.debug(f"Registered field profile '{name}'")

    def register_term(self, kind: str, factory: TermFactory) -> None:
        self._terms[kind] = factory
        logger.debug(f"Registered potential term '{kind}'")

    def names(self) -> dict[str, list[str]]:
        return {"fields": sorted(self._fields), "terms": sorted(self._terms)}


# Global registry instance
_registry: Optional[ProfileRegistry] = None


def get_profile_registry() -> ProfileRegistry:
    """Get the global profile registry."""
    global _registry
    if _registry is None:
        _registry = ProfileRegistry()
    return _registry
