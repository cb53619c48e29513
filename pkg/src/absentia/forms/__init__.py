"""Discrete quadratic forms of magnetic Schrödinger operators."""

from absentia.forms.assembly import (
    AssemblyError,
    HermitianForm,
    WeightMass,
    assemble_dirichlet_form,
    assemble_weight,
    covariant_radial_difference,
    hamiltonian_form,
    mass_matrix,
    potential_mass,
)
from absentia.forms.inequalities import (
    InequalityCheck,
    diamagnetic_check,
    magnetic_lower_bound_check,
)

__all__ = [
    "AssemblyError",
    "HermitianForm",
    "InequalityCheck",
    "WeightMass",
    "assemble_dirichlet_form",
    "assemble_weight",
    "covariant_radial_difference",
    "diamagnetic_check",
    "hamiltonian_form",
    "magnetic_lower_bound_check",
    "mass_matrix",
    "potential_mass",
]
