"""Unit tests for manufactured eigenpairs and identity residuals."""

import math

import numpy as np
import pytest

from absentia.fields.angular import AngularFluxDensity
from absentia.fields.gauges import ab_potential, transverse_gauge, zero_potential
from absentia.fields.profiles import RadialFieldProfile
from absentia.identities.manufactured import (
    Decomposition,
    GaussianMode,
    ManufactureError,
    SplitSpec,
    manufacture,
)
from absentia.identities.residuals import (
    IdentityError,
    RadialMultiplier,
    complex_lambda_terms,
    discrete_residual,
    phase_shift,
    refinement_order,
    residual_crucial_ss,
    residual_G1,
    residual_G2,
    residual_G3,
)
from absentia.mesh.grid import build_grid


@pytest.fixture
def oscillator():
    """u = e^{−r²/2}, λ = 2 and the derived V = r²."""
    return manufacture(GaussianMode(a=1.0), zero_potential(), lam=2.0)


@pytest.fixture
def landau():
    """Lowest Landau state of B = 1; the derived potential is V = λ − 1."""
    return manufacture(
        GaussianMode(a=0.5), transverse_gauge(RadialFieldProfile.constant(1.0)), lam=1.0
    )


@pytest.fixture
def oscillator_shifted():
    """u = e^{−r²/2} at λ = 0, so V = r² − 2."""
    return manufacture(GaussianMode(a=1.0), zero_potential(), lam=0.0)


@pytest.fixture
def magnetic_shifted():
    """u = e^{−r²/2} in the constant field B = 1/2 at λ = 0."""
    return manufacture(
        GaussianMode(a=1.0), transverse_gauge(RadialFieldProfile.constant(0.5)), lam=0.0
    )


@pytest.fixture
def ab_pair():
    return manufacture(
        GaussianMode(a=1.0, ell=1), ab_potential(AngularFluxDensity.constant(0.5)), lam=3.0
    )


class TestManufacture:
    """Tests for manufacture and GaussianMode."""

    def test_oscillator_potential(self, oscillator):
        r = np.linspace(0.0, 3.0, 7)

        assert oscillator.potential(r) == pytest.approx(r**2, abs=1e-12)
        assert oscillator.d_rv(r) == pytest.approx(3.0 * r**2, abs=1e-12)
        assert oscillator.equation_residual <= 1e-10

    def test_landau_potential_vanishes(self, landau):
        """With a = B/2 the Gaussian is a zero mode of (−i∇+A)² − B."""
        r = np.linspace(0.1, 5.0, 11)

        assert landau.potential(r) == pytest.approx(np.zeros_like(r), abs=1e-12)

    def test_ab_needs_angular_momentum(self):
        with pytest.raises(ManufactureError, match="ℓ ≥ 1"):
            manufacture(GaussianMode(a=1.0), ab_potential(AngularFluxDensity.constant(0.5)))

    def test_explicit_gauge_rejected(self):
        shifted = zero_potential().with_gauge_shift(
            lambda x, y: (np.ones_like(x), np.zeros_like(y))
        )

        with pytest.raises(ManufactureError, match="neither transverse"):
            manufacture(GaussianMode(), shifted)

    @pytest.mark.parametrize("kwargs", [{"a": 0.0}, {"a": -1.0}, {"ell": -1}])
    def test_invalid_mode(self, kwargs):
        with pytest.raises(ManufactureError):
            GaussianMode(**kwargs)

    def test_working_radius(self):
        """f² should have decayed to 1e-16 of its peak at the working radius."""
        mode = GaussianMode(a=1.0)

        assert mode.working_radius() == pytest.approx(math.sqrt(16.0 * math.log(10.0)))

    def test_zero_amplitude(self):
        """Amplitude 0 is the trivial solution."""
        pair = manufacture(GaussianMode(a=1.0, amplitude=0.0), zero_potential(), lam=2.0)

        assert residual_G1(pair, "one", n_r=256).lhs == 0.0


class TestMultiplierIdentities:
    """Tests for the quadrature residuals."""

    def test_G1_terms(self, oscillator):
        """λ∫|u|² should be 2π and both sides should equal π."""
        entry = residual_G1(oscillator, "one")

        assert entry.lhs_terms["re_lambda_mass"] == pytest.approx(2.0 * math.pi, rel=1e-6)
        assert entry.lhs == pytest.approx(math.pi, rel=1e-6)
        assert entry.rhs == pytest.approx(math.pi, rel=1e-6)
        assert entry.relative < 1e-6

    def test_G1_second_order(self, oscillator):
        entry = residual_G1(oscillator, "one", n_r=512)

        assert entry.order == pytest.approx(2.0, abs=0.2)

    def test_G1_radial_multiplier(self, oscillator):
        entry = residual_G1(oscillator, "r")

        assert entry.choice == "r"
        assert entry.relative < 1e-6

    def test_G1_custom_multiplier_needs_laplacian(self, oscillator):
        multiplier = RadialMultiplier(g=np.ones_like, dg=np.zeros_like)

        with pytest.raises(IdentityError, match="second derivative"):
            residual_G1(oscillator, multiplier)

    def test_unknown_multiplier(self, oscillator):
        with pytest.raises(IdentityError, match="Unknown multiplier"):
            residual_G1(oscillator, "square")

    def test_G2_vanishes(self, oscillator):
        """Real λ, real V and a real radial current make every G2 term zero."""
        entry = residual_G2(oscillator)

        assert entry.lhs == 0.0
        assert entry.absolute == 0.0
        assert math.isnan(entry.order)

    def test_G3_with_field(self, landau):
        """The |x|² identity should balance once the field coupling is included."""
        entry = residual_G3(landau)

        assert entry.lhs_terms["field"] != 0.0
        assert entry.relative < 1e-6

    def test_G3_oscillator(self, oscillator):
        entry = residual_G3(oscillator)

        assert entry.lhs == pytest.approx(2.0 * math.pi, rel=1e-6)
        assert entry.relative < 1e-8

    def test_ab_pair(self, ab_pair):
        assert residual_G1(ab_pair, "one").relative < 1e-6
        assert residual_crucial_ss(ab_pair).relative < 1e-6

    def test_crucial_all_v1(self, oscillator):
        entry = residual_crucial_ss(oscillator, "all_V1", n_r=512)

        assert entry.relative < 5e-5
        assert entry.order == pytest.approx(2.0, abs=0.2)

    def test_crucial_all_v2(self, oscillator):
        entry = residual_crucial_ss(oscillator, Decomposition.ALL_V2)

        assert entry.rhs_terms["d_rv1"] == 0.0
        assert entry.relative < 1e-6

    def test_crucial_smoothed_split(self, oscillator):
        split = SplitSpec(kind=Decomposition.SPLIT, radius=1.0, width=0.05)
        entry = residual_crucial_ss(oscillator, split)

        assert "split at r0=1" in entry.note
        assert entry.relative < 1e-6

    def test_crucial_needs_non_negative_lambda(self):
        pair = manufacture(GaussianMode(a=1.0), zero_potential(), lam=-1.0)

        with pytest.raises(IdentityError, match="λ ≥ 0"):
            residual_crucial_ss(pair)

    def test_entry_serializes(self, oscillator):
        data = residual_G2(oscillator).as_dict()

        assert data["order"] is None
        assert data["identity"] == "G2"


class TestComplexLambda:
    """Tests for phase_shift and the complex-λ terms."""

    def test_phase_shift_keeps_modulus(self, oscillator, unit_disk):
        u = oscillator.sample(unit_disk)
        shifted = phase_shift(u, 4.0 + 1.0j)

        assert np.abs(shifted.values) == pytest.approx(np.abs(u.values))
        expected = u.values * np.exp(-2.0j * unit_disk.node_r)
        assert shifted.values == pytest.approx(expected)

    def test_phase_shift_real_lambda(self, oscillator, unit_disk):
        """Real λ with sgn(0) = 0 should leave u untouched."""
        u = oscillator.sample(unit_disk)

        assert phase_shift(u, 4.0) is u
        flipped = phase_shift(u, 4.0, sign_at_zero=-1)
        assert flipped.values == pytest.approx(u.values * np.exp(2.0j * unit_disk.node_r))

    def test_phase_shift_negative_real_part(self, oscillator, unit_disk):
        with pytest.raises(IdentityError, match="Reλ"):
            phase_shift(oscillator.sample(unit_disk), -1.0 + 1.0j)

    def test_terms_total(self, oscillator):
        terms = complex_lambda_terms(oscillator, 4.0 + 2.0j, n_r=1024)
        parts = [v for name, v in terms.items() if name != "total"]

        assert terms["total"] == pytest.approx(sum(parts))
        assert set(terms) == {"weighted_gradient", "hardy", "weighted_potential", "total"}

    @pytest.mark.parametrize("lam", [0.0, -1.0 + 1.0j, 2.0j])
    def test_terms_need_positive_real_part(self, oscillator, lam):
        with pytest.raises(IdentityError):
            complex_lambda_terms(oscillator, lam)


class TestDiscreteResidual:
    """Tests for the discretization diagnostics."""

    def test_discrete_residual_decreases(self, oscillator):
        coarse = discrete_residual(oscillator, build_grid(0.0, 6.0, 60, 16))
        fine = discrete_residual(oscillator, build_grid(0.0, 6.0, 120, 16))

        assert fine < coarse
        assert fine < 1e-2

    def test_refinement_order(self):
        assert refinement_order(lambda n: 1.0 / n**2, 64) == pytest.approx(2.0)

    def test_refinement_order_at_floor(self):
        assert math.isnan(refinement_order(lambda n: 0.0, 64))


class TestRefinementOrder:
    """Observed orders of the quadrature residuals."""

    @pytest.mark.parametrize("pair_name", ["oscillator_shifted", "magnetic_shifted"])
    @pytest.mark.parametrize(
        "identity",
        [
            lambda pair: residual_G1(pair, "one", n_r=256),
            lambda pair: residual_G3(pair, n_r=256),
            lambda pair: residual_crucial_ss(pair, "all_V1", n_r=256),
        ],
        ids=["G1", "G3", "crucial_ss"],
    )
    def test_second_order(self, request, pair_name, identity):
        """Residuals should halve twice per doubling of n_r."""
        entry = identity(request.getfixturevalue(pair_name))

        assert entry.absolute > 1e-8
        assert 1.8 <= entry.order <= 2.2

    def test_G3_fourth_order_at_oscillator_eigenvalue(self, oscillator):
        """At λ = 2a the G3 boundary term vanishes to fourth order at the origin."""
        entry = residual_G3(oscillator, n_r=64)

        assert 3.6 <= entry.order <= 4.4
