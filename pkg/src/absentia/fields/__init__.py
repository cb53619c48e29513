"""Magnetic fields, vector potentials and electric potentials."""

from absentia.fields.angular import AngularFluxDensity, flux_distance
from absentia.fields.gauges import (
    GaugeTag,
    VectorPotentialField,
    ab_potential,
    curl_check,
    explicit_potential,
    transverse_gauge,
    zero_potential,
)
from absentia.fields.potentials import PotentialModel, PotentialTerm, suggest_decomposition
from absentia.fields.profiles import FieldModelError, FluxFunction, RadialFieldProfile, flux_profile
from absentia.fields.registry import FieldModel, get_profile_registry

__all__ = [
    "AngularFluxDensity",
    "FieldModel",
    "FieldModelError",
    "FluxFunction",
    "GaugeTag",
    "PotentialModel",
    "PotentialTerm",
    "RadialFieldProfile",
    "VectorPotentialField",
    "ab_potential",
    "curl_check",
    "explicit_potential",
    "flux_distance",
    "flux_profile",
    "get_profile_registry",
    "suggest_decomposition",
    "transverse_gauge",
    "zero_potential",
]
