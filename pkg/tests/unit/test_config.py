"""Unit tests for settings and scenario files."""

from pathlib import Path

import pytest

from absentia.certify.budget import TheoremId
from absentia.cli.scenario import ConfigError, parse_config, parse_config_text
from absentia.config import get_settings

SCENARIOS = Path(__file__).resolve().parents[2] / "scenarios"

FULL_SCENARIO = """
schema_version = 1
name = "gaussian_split"

[field]
profile = "gaussian_poly"
params = { b0 = 1.0, width = 1.0 }

[potential]
decomposition = "suggested"
terms = [
    { kind = "gaussian", params = { amplitude = 0.1, width = 1.0 } },
    { kind = "well", params = { depth = 0.2, radius = 0.5 } },
    { kind = "gaussian", part = "im", params = { amplitude = 0.01, width = 2.0 } },
]

[grid]
r_max = 4.0
n_r = 32
n_theta = 8
grading = 2.0

[certify]
theorem = "Thm3_nsa"
radii = [4.0, 8.0]
"""


class TestSettings:
    """Tests for process settings."""

    def test_defaults(self):
        settings = get_settings()

        assert settings.solver.tol == 1e-8
        assert settings.solver.seed == 42
        assert settings.mesh.tol_mesh == 0.05
        assert settings.certify.strict_margin == 1e-9

    def test_nested_env_override(self, monkeypatch):
        monkeypatch.setenv("ABSENTIA_SOLVER__SEED", "7")
        monkeypatch.setenv("ABSENTIA_LOG_LEVEL", "debug")

        settings = get_settings()
        assert settings.solver.seed == 7
        assert settings.log_level == "DEBUG"

    def test_invalid_tolerance(self, monkeypatch):
        monkeypatch.setenv("ABSENTIA_MESH__TOL_MESH", "2.0")

        with pytest.raises(ValueError):
            get_settings()


class TestParseConfig:
    """Tests for parse_config_text."""

    def test_minimal_defaults(self):
        """A file with only a name should fill every section with defaults."""
        config = parse_config_text('name = "bare"')

        assert config.schema_version == 1
        assert config.field.profile == "zero"
        assert config.grid.n_theta == 16
        assert config.certify.theorem is TheoremId.THM1
        assert config.solver.tol == 1e-8
        assert config.solver.seed == 42

    def test_solver_override_kept(self):
        config = parse_config_text("[solver]\nseed = 3\n")

        assert config.solver.seed == 3
        assert config.solver.max_iter == 5000

    def test_unknown_key_suggests_nearest(self):
        """A misspelled key should name the section, the line and the closest key."""
        with pytest.raises(ConfigError) as exc_info:
            parse_config_text("[grid]\nnr = 32\n")

        error = exc_info.value
        assert error.key == "grid.nr"
        assert error.line == 2
        assert error.suggestion == "n_r"
        assert "did you mean 'n_r'" in str(error)

    def test_radius_order(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_config_text("[grid]\nr_min = 2.0\nr_max = 1.0\n")

        assert exc_info.value.key == "grid.r_max"
        assert exc_info.value.line == 3

    def test_odd_n_theta(self):
        with pytest.raises(ConfigError, match="even"):
            parse_config_text("[grid]\nn_theta = 17\n")

    def test_syntax_error_has_line(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_config_text('name = "x"\n[grid\nn_r = 4\n')

        assert exc_info.value.line == 2
        assert "syntax error" in str(exc_info.value)

    def test_schema_version(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_config_text("schema_version = 2\n")

        assert exc_info.value.key == "schema_version"

    def test_unknown_profile(self):
        with pytest.raises(ConfigError, match="unknown field profile"):
            parse_config_text('[field]\nprofile = "dipole"\n')

    @pytest.mark.parametrize("radii", ["[]", "[1.0, -2.0]"])
    def test_invalid_radii(self, radii):
        with pytest.raises(ConfigError) as exc_info:
            parse_config_text(f"[certify]\nradii = {radii}\n")

        assert exc_info.value.key == "certify.radii"

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            parse_config(tmp_path / "missing.toml")


class TestBuildScenario:
    """Tests for ScenarioConfig.build."""

    def test_build_resolves_domain_objects(self):
        scenario = parse_config_text(FULL_SCENARIO).build()

        assert scenario.field.name == "gaussian_poly"
        assert scenario.grid_spec.grading == 2.0
        assert scenario.potential.is_decided
        assert [t.kind for t in scenario.potential.v1] == ["gaussian"]
        assert [t.kind for t in scenario.potential.v2] == ["well"]
        assert not scenario.potential.is_real

    def test_supplied_decomposition_keeps_undecided(self):
        text = '[[potential.terms]]\nkind = "gaussian"\nparams = { amplitude = 1.0, width = 1.0 }\n'
        scenario = parse_config_text(text).build()

        assert not scenario.potential.is_decided

    def test_ab_field_excises_origin_by_default(self):
        """Without r_min an Aharonov–Bohm grid should start at r_max·10⁻³."""
        text = '[field]\nprofile = "ab"\nparams = { mean = 0.5 }\n\n[grid]\nr_max = 10.0\n'
        config = parse_config_text(text)
        scenario = config.build()

        assert config.grid.r_min is None
        assert scenario.grid_spec.r_min == pytest.approx(1e-2)
        assert not scenario.grid_spec.build().has_origin

    def test_regular_field_keeps_full_disk(self):
        scenario = parse_config_text("[grid]\nr_max = 10.0\n").build()

        assert scenario.grid_spec.r_min == 0.0

    def test_explicit_r_min_wins(self):
        text = '[field]\nprofile = "ab"\nparams = { mean = 0.5 }\n\n[grid]\nr_min = 0.5\n'
        scenario = parse_config_text(text).build()

        assert scenario.grid_spec.r_min == 0.5

    def test_echo_round_trips(self):
        config = parse_config_text(FULL_SCENARIO)

        assert parse_config_text(FULL_SCENARIO).echo() == config.echo()
        assert config.echo()["certify"]["theorem"] == "Thm3_nsa"

    @pytest.mark.parametrize("name", ["step_field", "negative_well", "ab_half"])
    def test_shipped_scenarios_parse(self, name):
        config = parse_config(SCENARIOS / f"{name}.toml")

        assert config.name == name
        config.build()
