"""Unit tests for polar grids and quadrature."""

import math

import numpy as np
import pytest

from absentia.mesh.functions import GridFunction, IntegrationError, integrate, sample
from absentia.mesh.grid import GridError, GridSpec, RadialRule, build_grid, integrate_radial


class TestBuildGrid:
    """Tests for build_grid."""

    def test_disk_area(self, unit_disk):
        """Quadrature weights of the unit disk should sum to π exactly."""
        assert unit_disk.quad_weights.sum() == pytest.approx(math.pi, rel=1e-14)

    def test_annulus_area(self):
        """Annulus [1, 2] weights should sum to 3π."""
        grid = build_grid(1.0, 2.0, 16, 8)

        assert grid.quad_weights.sum() == pytest.approx(3.0 * math.pi, rel=1e-14)

    def test_origin_is_single_node(self, unit_disk):
        """A full disk should collapse ring 0 to one node."""
        assert unit_disk.has_origin
        assert unit_disk.ring_size(0) == 1
        assert unit_disk.n_nodes == 1 + 32 * 16

    def test_dirichlet_flags(self):
        """Boundary flags should mark r_max, and r_min on an annulus."""
        disk = build_grid(0.0, 1.0, 8, 8)
        annulus = build_grid(0.5, 1.0, 8, 8)

        assert np.all(disk.node_r[disk.boundary_flags] == 1.0)
        assert not disk.boundary_flags[0]
        assert set(np.unique(annulus.node_r[annulus.boundary_flags])) == {0.5, 1.0}
        assert annulus.n_unknowns == 7 * 8

    def test_graded_spacing(self):
        """Power grading should place nodes at r_max·(i/n)^grading."""
        grid = build_grid(0.0, 1.0, 4, 8, grading=2.0)

        assert grid.radii == pytest.approx([0.0, 1 / 16, 1 / 4, 9 / 16, 1.0])

    def test_geometric_spacing(self):
        """Geometric spacing should have a constant radius ratio."""
        grid = build_grid(0.01, 1.0, 4, 8, spacing="geometric")
        ratios = grid.radii[1:] / grid.radii[:-1]

        assert ratios == pytest.approx(np.full(4, 0.01 ** (-0.25)))

    @pytest.mark.parametrize(
        "kwargs,parameter",
        [
            ({"r_min": 0.0, "r_max": 1.0, "n_r": 3, "n_theta": 8}, "n_r"),
            ({"r_min": 0.0, "r_max": 1.0, "n_r": 8, "n_theta": 9}, "n_theta"),
            ({"r_min": 0.0, "r_max": 1.0, "n_r": 8, "n_theta": 6}, "n_theta"),
            ({"r_min": 1.0, "r_max": 1.0, "n_r": 8, "n_theta": 8}, "r_max"),
            ({"r_min": -1.0, "r_max": 1.0, "n_r": 8, "n_theta": 8}, "r_min"),
            ({"r_min": 0.0, "r_max": 1.0, "n_r": 8, "n_theta": 8, "grading": 0.0}, "grading"),
            (
                {"r_min": 0.0, "r_max": 1.0, "n_r": 8, "n_theta": 8, "spacing": "geometric"},
                "spacing",
            ),
        ],
    )
    def test_invalid_parameters(self, kwargs, parameter):
        """Out-of-range parameters should raise GridError naming the parameter."""
        with pytest.raises(GridError) as exc_info:
            build_grid(**kwargs)

        assert exc_info.value.parameter == parameter


class TestNesting:
    """Tests for with_radius and GridSpec."""

    def test_disk_doubles_n_r(self, unit_disk):
        """Grading 1 should double n_r when the radius doubles."""
        bigger = unit_disk.with_radius(2.0)

        assert bigger.n_r == 64
        assert bigger.radii[:33] == pytest.approx(unit_disk.radii)

    def test_graded_disk_nests_under_quadrupling(self):
        """Grading 2 should double n_r and nest when the radius quadruples."""
        base = build_grid(0.0, 5.0, 40, 8, grading=2.0)
        bigger = base.with_radius(20.0)

        assert bigger.n_r == 80
        assert set(np.round(base.radii, 12)) <= set(np.round(bigger.radii, 12))

    def test_annulus_scales_both_radii(self):
        """Annuli should scale r_min and keep n_r."""
        base = build_grid(0.01, 10.0, 64, 16, spacing="geometric")
        bigger = base.with_radius(20.0)

        assert bigger.r_min == pytest.approx(0.02)
        assert bigger.n_r == 64

    def test_spec_at_radius(self):
        """GridSpec.at_radius should match with_radius on the built grid."""
        spec = GridSpec(r_max=5.0, n_r=20, n_theta=8)
        grid = spec.at_radius(10.0)

        assert grid.r_max == 10.0
        assert grid.n_r == 40
        assert grid.describe()["spacing"] == "power"


class TestIntegration:
    """Tests for sampling and quadrature."""

    def test_inverse_r_on_annulus(self):
        """∫1/r over the annulus [1, 2] should be 2π up to O(h²)."""
        grid = build_grid(1.0, 2.0, 64, 16)
        value = integrate(grid, lambda r, theta: 1.0 / r)

        assert value == pytest.approx(2.0 * math.pi, rel=1e-4)

    def test_inverse_r_cell_rule_on_disk(self, unit_disk):
        """Cell integrals of 1/r should be finite on a full disk and sum to 2πR."""
        cells = unit_disk.cell_integral(lambda r: 1.0 / r)

        assert np.all(np.isfinite(cells))
        assert cells.sum() == pytest.approx(2.0 * math.pi, rel=1e-12)

    def test_second_moment(self):
        """∫x₁² over the disk of radius 2 should approach πR⁴/4."""
        grid = build_grid(0.0, 2.0, 64, 32)
        value = integrate(grid, lambda r, theta: (r * np.cos(theta)) ** 2)

        assert value == pytest.approx(4.0 * math.pi, rel=1e-2)

    def test_weighted_function_integral(self, unit_disk):
        """integrate should weight |ψ|² by w and the cell areas."""
        psi = sample(unit_disk, lambda r, theta: np.ones_like(r), test_function=False)

        assert integrate(unit_disk, None, psi) == pytest.approx(math.pi)
        assert integrate(unit_disk, lambda r, theta: 2.0 * np.ones_like(r), psi) == (
            pytest.approx(2.0 * math.pi)
        )

    def test_nan_weight_names_the_node(self, unit_disk):
        """A non-finite weight should raise IntegrationError with its node."""

        def weight(r, theta):
            return np.where(r > 0.5, np.nan, 1.0)

        with pytest.raises(IntegrationError) as exc_info:
            integrate(unit_disk, weight)

        assert exc_info.value.r > 0.5

    def test_sample_is_zero_on_dirichlet_nodes(self, unit_disk):
        """Test functions should vanish on the boundary ring."""
        psi = sample(unit_disk, lambda r, theta: np.exp(-(r**2)))

        assert np.all(psi.values[unit_disk.boundary_flags] == 0.0)
        assert psi.values[0] == pytest.approx(1.0)

    def test_sample_complex_stays_complex(self, unit_disk):
        psi = sample(unit_disk, lambda r, theta: r * np.exp(1j * theta))

        assert np.iscomplexobj(psi.values)

    def test_grid_function_shape_checked(self, unit_disk):
        """GridFunction should refuse arrays of the wrong length."""
        with pytest.raises(ValueError, match="nodal values"):
            GridFunction(values=np.zeros(3), grid=unit_disk)

    def test_unknowns_round_trip(self, unit_disk, random_psi):
        """embed should invert restrict on functions vanishing on the boundary."""
        psi = random_psi(unit_disk)

        assert np.array_equal(unit_disk.embed(psi.unknowns), psi.values)


class TestRadialRule:
    """Tests for the 1-D radial trapezoid rule."""

    def test_gaussian_plane_integral(self):
        """∫e^{−r²} over the plane should be π."""
        rule = RadialRule.build(8.0, 2048)
        value = integrate_radial(rule, np.exp(-(rule.nodes**2)) * rule.nodes)

        assert value == pytest.approx(math.pi, rel=1e-5)

    def test_needs_two_intervals(self):
        with pytest.raises(GridError):
            RadialRule.build(1.0, 1)
