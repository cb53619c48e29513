"""Polar grids, nodal functions and quadrature."""

from absentia.mesh.functions import GridFunction, IntegrationError, integrate, sample
from absentia.mesh.grid import (
    GridError,
    GridSpec,
    PolarGrid,
    RadialRule,
    build_grid,
    integrate_radial,
)

__all__ = [
    "GridError",
    "GridFunction",
    "GridSpec",
    "IntegrationError",
    "PolarGrid",
    "RadialRule",
    "build_grid",
    "integrate",
    "integrate_radial",
    "sample",
]
