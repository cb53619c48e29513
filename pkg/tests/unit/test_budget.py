"""Unit tests for budget inequalities and certificates."""

import math
from dataclasses import replace

import numpy as np
import pytest

from absentia.certify.budget import (
    Budget,
    CertificationError,
    TheoremId,
    Verdict,
    ab_penalty,
    check_budget_ab,
    check_budget_multi,
    check_budget_nsa,
    check_budget_robust,
    check_budget_thm1,
    robust_penalty,
)
from absentia.certify.sweep import _apply_drift_rule, constant_drift
from absentia.fields.angular import AngularFluxDensity


@pytest.fixture
def thm1_budget():
    """b₁ + b₂² + b₃² + b₄ = 0.3 + 0.16 + 0.16 + 0.2 = 0.82."""
    return Budget(b1=0.3, b2=0.4, b3=0.4, b4=0.2)


@pytest.fixture
def nsa_budget():
    """0.2 + 0.09 + 0.09 + 0.1 + 0.1 + 0.5·0.2 = 0.68."""
    return Budget(a2=0.2, b1=0.2, b2=0.3, b3=0.3, b4=0.1, b5=0.1, b6=0.5)


class TestBudget:
    """Tests for the Budget record."""

    @pytest.mark.parametrize("value", [-0.1, math.nan])
    def test_rejects_invalid_constants(self, value):
        with pytest.raises(CertificationError) as exc_info:
            Budget(b2=value)

        assert exc_info.value.constant == "b2"

    def test_effective_b5(self):
        assert Budget(b5=0.1, b5_display=0.3).b5_effective == 0.3


class TestTheorem1:
    """Tests for check_budget_thm1 and check_budget_multi."""

    def test_certified(self, thm1_budget):
        report = check_budget_thm1(thm1_budget)

        assert report.theorem_id is TheoremId.THM1
        assert report.budget_value == pytest.approx(0.82)
        assert report.margin == pytest.approx(0.18)
        assert report.certified
        assert report.failures == []

    def test_constant_at_one_fails(self):
        """b₁ = 1 should fail both the constant and the budget."""
        report = check_budget_thm1(Budget(b1=1.0))

        assert report.verdict is Verdict.NOT_CERTIFIED
        assert len(report.failures) == 2

    def test_field_constant_must_be_below_one(self):
        report = check_budget_thm1(Budget(b=1.2))

        assert report.budget_value == 0.0
        assert not report.certified
        assert report.failures[0].startswith("b=")

    def test_strict_margin(self):
        """A budget within the margin of 1 should not certify."""
        budget = Budget(b4=1.0 - 5e-10)

        assert not check_budget_thm1(budget).certified
        assert check_budget_thm1(budget, strict_margin=0.0).certified

    def test_margin_from_settings(self, monkeypatch):
        monkeypatch.setenv("ABSENTIA_CERTIFY__STRICT_MARGIN", "0.1")

        assert not check_budget_thm1(Budget(b1=0.95)).certified

    def test_multi_reduces_to_thm1(self, thm1_budget):
        assert check_budget_multi(2, thm1_budget).budget_value == pytest.approx(
            check_budget_thm1(thm1_budget).budget_value
        )

    @pytest.mark.parametrize("d,expected,certified", [(3, 0.98, True), (4, 1.14, False)])
    def test_multi_dimension(self, thm1_budget, d, expected, certified):
        """(d−1)b₃² should scale the third term."""
        report = check_budget_multi(d, thm1_budget)

        assert report.budget_value == pytest.approx(expected)
        assert report.certified is certified
        assert report.constants.d == d
        assert "arithmetic only" in report.diagnostics["note"]

    def test_multi_rejects_dimension_zero(self, thm1_budget):
        with pytest.raises(CertificationError):
            check_budget_multi(0, thm1_budget)

    @pytest.mark.parametrize("key", ["b", "b1", "b2", "b3", "b4"])
    def test_monotone(self, key):
        """Raising a constant should never turn a failing budget into a certificate."""
        failing = Budget(b1=0.5, b2=0.5, b3=0.5, b4=0.3)
        raised = replace(failing, **{key: getattr(failing, key) + 0.1})

        assert not check_budget_thm1(failing).certified
        assert not check_budget_thm1(raised).certified
        assert check_budget_thm1(raised).budget_value >= check_budget_thm1(failing).budget_value


class TestNonSelfAdjoint:
    """Tests for check_budget_nsa."""

    def test_certified(self, nsa_budget):
        report = check_budget_nsa(nsa_budget, obvious=True)

        assert report.budget_value == pytest.approx(0.68)
        assert report.certified
        assert report.diagnostics["obvious_condition"] == "holds"

    def test_a2_at_one(self, nsa_budget):
        report = check_budget_nsa(replace(nsa_budget, a2=1.0, b6=0.0))

        assert not report.certified
        assert any(f.startswith("a2=") for f in report.failures)

    def test_obvious_condition_fails(self, nsa_budget):
        report = check_budget_nsa(nsa_budget, obvious=False)

        assert report.verdict is Verdict.INAPPLICABLE
        assert math.isnan(report.budget_value)

    def test_remark_reduces_to_thm1(self, nsa_budget):
        """ReV ≥ 1/(4r²) should drop b₅ and b₆."""
        report = check_budget_nsa(nsa_budget, obvious=False, remark=True)
        thm1 = check_budget_thm1(nsa_budget)

        assert report.budget_value == pytest.approx(thm1.budget_value)
        assert report.constants.b5 == 0.0
        assert report.diagnostics["obvious_condition"] == "pointwise_shortcut"

    def test_display_weight_drives_b5(self, nsa_budget):
        report = check_budget_nsa(replace(nsa_budget, b5_display=0.2))

        assert report.budget_value == pytest.approx(0.78)
        assert "b5_weight" in report.diagnostics
        assert report.diagnostics["obvious_condition"] == "unchecked"


class TestRobust:
    """Tests for check_budget_robust."""

    @pytest.mark.parametrize("a2,penalty,certified", [(0.05, 0.8246, True), (0.07, 1.1545, False)])
    def test_optimal_penalty(self, a2, penalty, certified):
        report = check_budget_robust(Budget(a2=a2))

        assert report.diagnostics["penalty"] == pytest.approx(4.0 * math.sqrt(17.0) * a2)
        assert report.budget_value == pytest.approx(penalty, abs=1e-4)
        assert report.certified is certified
        assert report.constants.epsilon == pytest.approx(math.sqrt(17.0) / 2.0 * a2)

    def test_vanishing_a2(self):
        """a₂ = 0 should leave ε at its floor and a 4·10⁻⁶ penalty."""
        report = check_budget_robust(Budget())

        assert report.constants.epsilon == 1e-6
        assert report.budget_value == pytest.approx(4e-6)
        assert report.certified

    def test_minimizer_beats_grid(self):
        a2 = 0.05
        optimal = check_budget_robust(Budget(a2=a2)).diagnostics["penalty"]

        for epsilon in np.linspace(0.01, 0.99, 11):
            assert robust_penalty(a2, epsilon) >= optimal - 1e-12

    def test_supplied_epsilon(self):
        report = check_budget_robust(Budget(a2=0.05), epsilon=0.5)

        assert report.diagnostics["epsilon_choice"] == "supplied"
        assert report.budget_value == pytest.approx(17.0 * 0.0025 / 0.5 + 2.0)
        assert not report.certified

    @pytest.mark.parametrize("epsilon", [0.0, 1.0, -0.5])
    def test_epsilon_range(self, epsilon):
        with pytest.raises(CertificationError):
            check_budget_robust(Budget(a2=0.05), epsilon=epsilon)


class TestAharonovBohm:
    """Tests for check_budget_ab."""

    def test_half_flux_without_potential(self):
        """The pure Aharonov–Bohm Laplacian with β = 1/2 should certify with budget 0."""
        report = check_budget_ab(AngularFluxDensity.constant(0.5), Budget())

        assert report.budget_value == 0.0
        assert report.certified
        assert report.constants.beta == 0.5

    @pytest.mark.parametrize("alpha", [0.3, 1.3, AngularFluxDensity.constant(-0.3)])
    def test_optimal_penalty(self, alpha):
        report = check_budget_ab(alpha, Budget(a2=0.1))
        expected = (0.25 - 0.09) * 2.0 * 0.1 / 0.3

        assert report.budget_value == pytest.approx(expected)
        assert report.constants.epsilon == pytest.approx(0.1 / 0.3)
        assert report.certified

    def test_b1_ignored(self):
        report = check_budget_ab(0.5, Budget(b1=5.0))

        assert report.constants.b1 == 0.0
        assert report.certified

    def test_integer_flux_inapplicable(self):
        report = check_budget_ab(2.0, Budget())

        assert report.verdict is Verdict.INAPPLICABLE
        assert "β = 0" in report.failures[0]

    def test_penalty_formula(self):
        assert ab_penalty(0.3, 0.1, 0.5) == pytest.approx(0.16 * (0.5 + 0.01 / (0.09 * 0.5)))


class TestDrift:
    """Tests for constant_drift."""

    def test_relative_change(self):
        drift = constant_drift(Budget(b1=0.5), Budget(b1=0.505))

        assert drift["b1"] == pytest.approx(0.01)
        assert drift["b2"] == 0.0

    def test_appearing_constant(self):
        assert constant_drift(Budget(), Budget(b3=0.1))["b3"] == math.inf

    @pytest.mark.parametrize(
        "previous,current",
        [
            (Budget(b=0.10, b1=0.10), Budget(b=0.13, b1=0.10)),
            (Budget(b1=0.5), Budget(b1=0.53)),
        ],
    )
    def test_large_drift_withholds_certificate(self, previous, current):
        """A drift above the tolerance should refuse the certificate even with a wide margin."""
        final = check_budget_thm1(current)
        assert final.certified

        report = _apply_drift_rule(final, check_budget_thm1(previous), radius_ratio=2.0)

        assert report.verdict is Verdict.NOT_CERTIFIED
        assert report.diagnostics["max_drift"] > 0.01
        assert "drift" in report.failures[-1]

    def test_small_drift_keeps_certificate(self):
        final = check_budget_thm1(Budget(b1=0.504))
        report = _apply_drift_rule(final, check_budget_thm1(Budget(b1=0.5)), radius_ratio=2.0)

        assert report.certified
        assert report.diagnostics["drift_radius_ratio"] == 2.0

    def test_tolerance_from_settings(self, monkeypatch):
        monkeypatch.setenv("ABSENTIA_CERTIFY__DRIFT_TOLERANCE", "0.5")
        final = check_budget_thm1(Budget(b1=0.53))

        assert _apply_drift_rule(final, check_budget_thm1(Budget(b1=0.5)), 2.0).certified
