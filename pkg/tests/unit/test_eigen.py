"""Unit tests for eigen-solves, Rayleigh extrema and stabilization."""

import math

import numpy as np
import pytest
import scipy.linalg as la
import scipy.sparse as sp

from absentia.fields.gauges import zero_potential
from absentia.fields.potentials import PotentialModel, PotentialTerm
from absentia.forms.assembly import (
    HermitianForm,
    WeightMass,
    assemble_dirichlet_form,
    assemble_weight,
    mass_matrix,
)
from absentia.mesh.functions import GridFunction
from absentia.mesh.grid import GridSpec, build_grid
from absentia.solvers.eigen import (
    InvalidPencilError,
    SolverError,
    min_rayleigh,
    participation_radius,
    smallest_eigs,
    sup_rayleigh,
)
from absentia.solvers.stability import SpectralScenario, StabilityVerdict, stabilization_probe

J01_SQUARED = 2.404825557695773**2
J11_SQUARED = 3.831705970207512**2


@pytest.fixture
def laplacian(unit_disk):
    """Dirichlet Laplacian form on the unit disk."""
    return assemble_dirichlet_form(zero_potential(), unit_disk)


class TestSmallestEigs:
    """Tests for smallest_eigs."""

    def test_disk_ground_state(self, laplacian):
        """The Dirichlet disk should give λ₁ ≈ j₀,₁²."""
        result = smallest_eigs(laplacian, k=1)

        assert result.converged
        assert result.eigenvalues[0] == pytest.approx(J01_SQUARED, rel=1e-2)
        assert result.residual_norms[0] < 1e-6
        assert result.shifts

    def test_degenerate_pair(self, laplacian):
        """λ₂ = λ₃ ≈ j₁,₁² should come out as a degenerate pair."""
        result = smallest_eigs(laplacian, k=3)

        assert result.eigenvalues[1] == pytest.approx(result.eigenvalues[2], rel=1e-8)
        assert result.eigenvalues[1] == pytest.approx(J11_SQUARED, rel=2e-2)

    def test_eigenvectors_are_mass_orthonormal(self, laplacian, unit_disk):
        result = smallest_eigs(laplacian, k=3)
        m = mass_matrix(unit_disk).diagonal
        gram = result.vectors.conj().T @ (m[:, None] * result.vectors)

        assert np.allclose(gram, np.eye(3), atol=1e-8)

    def test_dense_path_matches_scipy(self):
        """Small pencils should be solved densely and exactly."""
        grid = build_grid(0.0, 1.0, 4, 8)
        k = assemble_dirichlet_form(zero_potential(), grid)
        m = mass_matrix(grid).diagonal
        expected = la.eigh(k.matrix.toarray(), np.diag(m), eigvals_only=True)[0]

        result = smallest_eigs(k, k=1)
        assert result.iterations == 0
        assert result.eigenvalues[0] == pytest.approx(expected, rel=1e-12)

    def test_same_seed_same_result(self, laplacian):
        """Repeated solves with one seed should agree bit for bit."""
        a = smallest_eigs(laplacian, k=2, seed=7)
        b = smallest_eigs(laplacian, k=2, seed=7)

        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert a.as_dict()["seed"] == 7

    def test_eigenfunction_lives_on_grid(self, laplacian, unit_disk):
        psi = smallest_eigs(laplacian, k=1).eigenfunction(0)

        assert isinstance(psi, GridFunction)
        assert psi.values[unit_disk.boundary_flags] == pytest.approx(0.0)

    def test_invalid_k(self, laplacian):
        with pytest.raises(InvalidPencilError, match="k must be"):
            smallest_eigs(laplacian, k=0)

    def test_non_positive_mass(self, laplacian, unit_disk):
        """A mass with a zero entry should be rejected."""
        w = assemble_weight(lambda r, theta: np.where(r < 0.5, 1.0, 0.0), unit_disk)

        with pytest.raises(InvalidPencilError, match="positive"):
            smallest_eigs(laplacian, w)


class TestRayleigh:
    """Tests for sup_rayleigh and min_rayleigh."""

    @pytest.fixture
    def inner_weight(self, unit_disk):
        return assemble_weight(
            lambda r, theta: np.where(r <= 0.5, 1.0, 0.0), unit_disk, label="1_{r<=1/2}"
        )

    def test_sup_matches_dense_generalized_problem(self, laplacian, inner_weight):
        """Lanczos and dense supports should agree with a dense W v = c K v solve."""
        w = np.diag(inner_weight.diagonal)
        expected = la.eigh(w, laplacian.matrix.toarray(), eigvals_only=True)[-1]

        lanczos = sup_rayleigh(inner_weight, laplacian, dense_threshold=10)
        dense = sup_rayleigh(inner_weight, laplacian, dense_threshold=10_000)

        assert lanczos.method == "lanczos"
        assert dense.method == "dense"
        assert lanczos.value == pytest.approx(expected, rel=1e-6)
        assert dense.value == pytest.approx(expected, rel=1e-10)
        assert dense.b_value == pytest.approx(math.sqrt(expected), rel=1e-10)

    def test_sup_of_mass_is_inverse_ground_state(self, laplacian, unit_disk):
        """sup ∫|ψ|²/K[ψ] should be 1/λ₁."""
        sup = sup_rayleigh(mass_matrix(unit_disk), laplacian)
        lam = smallest_eigs(laplacian, k=1).eigenvalues[0]

        assert sup.value == pytest.approx(1.0 / lam, rel=1e-6)

    def test_zero_weight(self, laplacian, unit_disk):
        w = assemble_weight(lambda r, theta: np.zeros_like(r), unit_disk)
        sup = sup_rayleigh(w, laplacian)

        assert sup.value == 0.0
        assert sup.method == "zero_weight"

    def test_negative_weight_rejected(self, laplacian, unit_disk):
        w = assemble_weight(lambda r, theta: -np.ones_like(r), unit_disk, signed=True)

        with pytest.raises(InvalidPencilError, match="negative"):
            sup_rayleigh(w, laplacian)

    def test_min_with_positive_weight(self, laplacian, unit_disk):
        """min_rayleigh with the mass should reproduce λ₁ by shift-invert."""
        minimum = min_rayleigh(laplacian, mass_matrix(unit_disk))

        assert minimum.method == "shift_invert"
        assert minimum.value == pytest.approx(J01_SQUARED, rel=1e-2)
        assert minimum.vector is not None

    def test_min_with_partial_support(self, laplacian, inner_weight):
        """A weight with zeros should go through the inverse of the sup."""
        minimum = min_rayleigh(laplacian, inner_weight)
        sup = sup_rayleigh(inner_weight, laplacian)

        assert minimum.method.startswith("inverse_")
        assert minimum.value == pytest.approx(1.0 / sup.value, rel=1e-8)

    @pytest.mark.parametrize("seed", range(50))
    def test_lanczos_matches_dense_on_random_pencils(self, seed):
        """Random SPD forms and non-negative diagonal weights should give one constant."""
        gen = np.random.default_rng(seed)
        n = int(gen.integers(40, 201))
        a = gen.standard_normal((n, n))
        k_dense = a @ a.T + n * np.eye(n)
        k_dense = (k_dense + k_dense.T) / 2.0
        diag = gen.uniform(0.0, 1.0, n) * (gen.random(n) < 0.7)
        diag[:10] = gen.uniform(0.1, 1.0, 10)
        form = HermitianForm(sp.csr_matrix(k_dense), label="random")
        weight = WeightMass(diag, label="random")
        expected = la.eigh(np.diag(diag), k_dense, eigvals_only=True)[-1]

        lanczos = sup_rayleigh(weight, form, dense_threshold=1, seed=seed)
        dense = sup_rayleigh(weight, form, dense_threshold=10_000)

        assert lanczos.method == "lanczos"
        assert lanczos.converged
        assert lanczos.value == pytest.approx(expected, rel=1e-8)
        assert dense.value == pytest.approx(expected, rel=1e-10)


class TestStabilization:
    """Tests for stabilization_probe."""

    def test_oscillator_is_genuine(self, zero_field):
        """−Δ + r² should keep λ₁ ≈ 2 as the disk grows."""
        scenario = SpectralScenario(
            field=zero_field,
            potential=PotentialModel(v1=(PotentialTerm.power(1.0, 2.0),)),
            grid_spec=GridSpec(r_max=6.0, n_r=60, n_theta=16),
        )
        report = stabilization_probe(scenario, [6.0, 12.0])

        assert report.verdict is StabilityVerdict.GENUINE
        assert report.eigenvalues[-1] == pytest.approx(2.0, rel=2e-2)
        assert report.participation_radii[-1] == pytest.approx(1.0, rel=5e-2)

    def test_free_laplacian_is_artifact(self, zero_field):
        """Without a potential λ₁ scales like 1/R² and should be an artifact."""
        scenario = SpectralScenario(
            field=zero_field,
            potential=PotentialModel(),
            grid_spec=GridSpec(r_max=5.0, n_r=20, n_theta=8),
        )
        report = stabilization_probe(scenario, [10.0, 5.0])

        assert report.radii == [5.0, 10.0]
        assert report.verdict is StabilityVerdict.ARTIFACT
        assert "drifts" in report.notice
        assert report.as_dict()["verdict"] == "artifact"

    def test_needs_two_radii(self, zero_field):
        scenario = SpectralScenario(zero_field, PotentialModel(), GridSpec(5.0, 20, 8))

        with pytest.raises(SolverError, match="two radii"):
            stabilization_probe(scenario, [5.0])

    def test_two_radii_warn(self, zero_field, caplog):
        """Two radii should still give a verdict, with a warning."""
        scenario = SpectralScenario(zero_field, PotentialModel(), GridSpec(5.0, 20, 8))

        with caplog.at_level("WARNING", logger="absentia.solvers.stability"):
            report = stabilization_probe(scenario, [5.0, 10.0])

        assert report.verdict is StabilityVerdict.ARTIFACT
        assert "single comparison" in caplog.text

    def test_complex_potential_rejected(self, zero_field):
        scenario = SpectralScenario(
            zero_field,
            PotentialModel(im=(PotentialTerm.gaussian(0.1, 1.0),)),
            GridSpec(5.0, 20, 8),
        )

        with pytest.raises(SolverError, match="real potential"):
            scenario.assemble(5.0)

    def test_participation_radius_of_zero(self, unit_disk):
        with pytest.raises(SolverError):
            participation_radius(GridFunction(np.zeros(unit_disk.n_nodes), unit_disk))
