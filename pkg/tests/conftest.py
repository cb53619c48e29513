"""Pytest configuration and fixtures for absentia tests."""

import os

import numpy as np
import pytest

# Set test environment
os.environ.setdefault("ABSENTIA_LOG_LEVEL", "WARNING")


@pytest.fixture(autouse=True)
def fresh_settings():
    """Clear the cached settings so monkeypatched env vars take effect."""
    from absentia.config import get_settings

    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    """Seeded generator for property trials."""
    return np.random.default_rng(1234)


@pytest.fixture
def unit_disk():
    """Unit disk with a uniform radial mesh."""
    from absentia.mesh.grid import build_grid

    return build_grid(0.0, 1.0, 32, 16)


@pytest.fixture
def small_disk():
    """Coarse disk of radius 4 for quick form and solver checks."""
    from absentia.mesh.grid import build_grid

    return build_grid(0.0, 4.0, 24, 16)


@pytest.fixture
def ab_annulus():
    """Geometric annulus excising the origin for Aharonov–Bohm potentials."""
    from absentia.mesh.grid import build_grid

    return build_grid(0.01, 8.0, 96, 32, spacing="geometric")


@pytest.fixture
def step_field():
    """B = 1 on r <= 1/4, the running example of a compactly supported field."""
    from absentia.fields.registry import get_profile_registry

    return get_profile_registry().field("step", b0=1.0, r0=0.25)


@pytest.fixture
def zero_field():
    from absentia.fields.registry import get_profile_registry

    return get_profile_registry().field("zero")


@pytest.fixture
def half_flux():
    """Aharonov–Bohm field with mean flux 1/2."""
    from absentia.fields.registry import get_profile_registry

    return get_profile_registry().field("ab", mean=0.5)


@pytest.fixture
def random_psi(rng):
    """Factory of random grid functions vanishing on Dirichlet nodes."""
    from absentia.mesh.functions import GridFunction

    def make(grid, complex_=True):
        values = rng.standard_normal(grid.n_nodes)
        if complex_:
            values = values + 1j * rng.standard_normal(grid.n_nodes)
        values[grid.boundary_flags] = 0.0
        return GridFunction(values=values, grid=grid)

    return make
