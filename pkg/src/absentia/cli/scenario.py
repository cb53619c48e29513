"""Scenario files: TOML sections validated into a pydantic model.

A scenario names a field profile, potential terms and a grid family, and
carries one section per command. Every section forbids unknown keys; the
error names the nearest valid key.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional, Union, get_args
import difflib
import logging
import re
import tomllib

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
)

from absentia.certify.budget import TheoremId
from absentia.config import get_settings
from absentia.errors import AbsentiaError
from absentia.fields.potentials import PotentialModel
from absentia.fields.registry import FieldModel, get_profile_registry
from absentia.hardy.probes import InequalityId
from absentia.mesh.grid import GridSpec

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
AB_EXCISION = 1e-3

_LINE_PATTERN = re.compile(r"line (\d+)")


class ConfigError(AbsentiaError, ValueError):
    """Raised when a scenario file cannot be read, parsed or validated."""

    def __init__(
        self,
        message: str,
        key: Optional[str] = None,
        line: Optional[int] = None,
        suggestion: Optional[str] = None,
    ):
        self.key = key
        self.line = line
        self.suggestion = suggestion
        where = f"{key}: " if key else ""
        at = f" (line {line})" if line else ""
        hint = f"; did you mean '{suggestion}'?" if suggestion else ""
        super().__init__(f"{where}{message}{at}{hint}")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


ParamValue = Union[float, list[float]]


class FieldConfig(_Section):
    profile: str = "zero"
    params: dict[str, ParamValue] = Field(default_factory=dict)

    @field_validator("profile")
    @classmethod
    def validate_profile(cls, v: str) -> str:
        known = get_profile_registry().names()["fields"]
        if v not in known:
            raise ValueError(f"unknown field profile '{v}', expected one of {known}")
        return v


class TermConfig(_Section):
    kind: str
    part: Literal["v1", "v2", "im", "undecided"] = "undecided"
    params: dict[str, float] = Field(default_factory=dict)

    @field_validator("kind")
    @classmethod
    def validate_kind(cls, v: str) -> str:
        known = get_profile_registry().names()["terms"]
        if v not in known:
            raise ValueError(f"unknown potential term '{v}', expected one of {known}")
        return v


class PotentialConfig(_Section):
    terms: list[TermConfig] = Field(default_factory=list)
    decomposition: Literal["supplied", "suggested", "all_v1", "all_v2"] = "supplied"


class GridConfig(_Section):
    """Grid family; an absent r_min excises r_max·10⁻³ for Aharonov–Bohm fields."""

    r_min: Optional[float] = Field(default=None, ge=0.0)
    r_max: float = Field(default=10.0, gt=0.0)
    n_r: int = Field(default=64, ge=4)
    n_theta: int = Field(default=16, ge=8)
    grading: float = Field(default=1.0, gt=0.0)
    spacing: Literal["power", "geometric"] = "power"

    @field_validator("r_max")
    @classmethod
    def validate_radius_order(cls, v: float, info: ValidationInfo) -> float:
        r_min = info.data.get("r_min") or 0.0
        if v <= r_min:
            raise ValueError(f"r_max={v} must exceed r_min={r_min}")
        return v

    @field_validator("n_theta")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError("n_theta must be even")
        return v


class SolverConfig(_Section):
    """Solver overrides; absent keys fall back to the process settings."""

    tol: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    max_iter: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    k: Optional[int] = Field(default=None, ge=1)

    def resolved(self) -> "SolverConfig":
        settings = get_settings().solver
        return SolverConfig(
            tol=settings.tol if self.tol is None else self.tol,
            max_iter=settings.max_iter if self.max_iter is None else self.max_iter,
            seed=settings.seed if self.seed is None else self.seed,
            k=settings.k if self.k is None else self.k,
        )


def _check_radii(v: Optional[list[float]]) -> Optional[list[float]]:
    if v is not None:
        if not v:
            raise ValueError("radii must not be empty")
        if any(r <= 0 for r in v):
            raise ValueError("radii must be positive")
    return v


class CertifyConfig(_Section):
    theorem: TheoremId = TheoremId.THM1
    route: Literal["variational", "pointwise"] = "variational"
    radii: Optional[list[float]] = None
    epsilon: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    d: int = Field(default=2, ge=1)

    @field_validator("radii")
    @classmethod
    def validate_radii(cls, v: Optional[list[float]]) -> Optional[list[float]]:
        return _check_radii(v)


class SpectrumConfig(_Section):
    radii: Optional[list[float]] = None
    k: Optional[int] = Field(default=None, ge=1)

    @field_validator("radii")
    @classmethod
    def validate_radii(cls, v: Optional[list[float]]) -> Optional[list[float]]:
        return _check_radii(v)


class HardyConfig(_Section):
    """Probe selection; an empty list picks the probes that fit the field."""

    probes: list[InequalityId] = Field(default_factory=list)
    radii: Optional[list[float]] = None
    hp_radius: float = Field(default=1.0, gt=0.0)
    hp_n_r: int = Field(default=128, ge=4)
    hp_n_theta: int = Field(default=16, ge=8)
    dimension: int = Field(default=2, ge=1)
    n_modes: int = Field(default=64, ge=4)
    tol_mesh: Optional[float] = Field(default=None, gt=0.0, lt=1.0)

    @field_validator("radii")
    @classmethod
    def validate_radii(cls, v: Optional[list[float]]) -> Optional[list[float]]:
        return _check_radii(v)


class IdentitiesConfig(_Section):
    a: float = Field(default=1.0, gt=0.0)
    ell: int = Field(default=0, ge=0)
    amplitude: float = 1.0
    lam: float = 0.0
    identities: list[Literal["G1", "G2", "G3", "crucial_ss"]] = Field(
        default_factory=lambda: ["G1", "G2", "G3", "crucial_ss"]
    )
    g1_multiplier: Literal["one", "r"] = "one"
    g2_multiplier: Literal["one", "r"] = "r"
    decomposition: Literal["all_V1", "all_V2", "split"] = "all_V1"
    split_radius: float = Field(default=1.0, gt=0.0)
    split_width: float = Field(default=1e-3, gt=0.0)
    n_r: Optional[int] = Field(default=None, ge=2)
    discrete: bool = True
    complex_lambda: Optional[tuple[float, float]] = None


class OutputConfig(_Section):
    dir: Optional[str] = None
    report: str = "report.json"
    eigenvalues_csv: str = "eigenvalues.csv"
    hardy_csv: str = "hardy.csv"
    dump_matrix: bool = False


class ScenarioConfig(BaseModel):
    """A complete scenario file."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    schema_version: Literal[1] = SCHEMA_VERSION
    name: str = "scenario"
    field: FieldConfig = Field(default_factory=FieldConfig)
    potential: PotentialConfig = Field(default_factory=PotentialConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    certify: CertifyConfig = Field(default_factory=CertifyConfig)
    spectrum: SpectrumConfig = Field(default_factory=SpectrumConfig)
    hardy: HardyConfig = Field(default_factory=HardyConfig)
    identities: IdentitiesConfig = Field(default_factory=IdentitiesConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    def echo(self) -> dict:
        return self.model_dump(mode="json")

    def build(self) -> "Scenario":
        """Resolve the field, potential and grid family named by the config."""
        registry = get_profile_registry()
        field_model = registry.field(self.field.profile, **self.field.params)
        parts: dict[str, list] = {"v1": [], "v2": [], "im": [], "undecided": []}
        for term in self.potential.terms:
            parts[term.part].append(registry.term(term.kind, **term.params))
        potential = PotentialModel(**{k: tuple(v) for k, v in parts.items()})
        if self.potential.decomposition != "supplied":
            potential = potential.decided(self.potential.decomposition)
        g = self.grid
        r_min = g.r_min
        if r_min is None:
            r_min = g.r_max * AB_EXCISION if field_model.is_ab else 0.0
        grid_spec = GridSpec(g.r_max, g.n_r, g.n_theta, r_min, g.grading, g.spacing)
        return Scenario(self, field_model, potential, grid_spec)


@dataclass(frozen=True)
class Scenario:
    """A validated config with its resolved domain objects."""

    config: ScenarioConfig
    field: FieldModel
    potential: PotentialModel
    grid_spec: GridSpec


def _model_at(loc: tuple) -> Optional[type[BaseModel]]:
    """The section model that owns the last component of a validation location."""
    model: type[BaseModel] = ScenarioConfig
    for part in loc[:-1]:
        if isinstance(part, int):
            continue
        info = model.model_fields.get(part)
        if info is None:
            return None
        candidates = [info.annotation, *get_args(info.annotation)]
        nested = [
            c for c in candidates if isinstance(c, type) and issubclass(c, BaseModel)
        ]
        if not nested:
            return None
        model = nested[0]
    return model


def _locate(text: str, key: str) -> Optional[int]:
    pattern = re.compile(rf"^\s*\"?{re.escape(key)}\"?\s*=")
    for number, line in enumerate(text.splitlines(), start=1):
        if pattern.match(line):
            return number
    return None


def _config_error(e: ValidationError, text: str) -> ConfigError:
    error = e.errors()[0]
    loc = tuple(error["loc"])
    key = ".".join(str(p) for p in loc)
    leaf = str(loc[-1]) if loc else ""
    line = _locate(text, leaf) if leaf else None
    if error["type"] == "extra_forbidden":
        model = _model_at(loc)
        valid = list(model.model_fields) if model else []
        close = difflib.get_close_matches(leaf, valid, n=1, cutoff=0.5)
        return ConfigError("unknown key", key, line, close[0] if close else None)
    return ConfigError(error["msg"], key, line)


def parse_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a scenario file.

    Args:
        path: UTF-8 TOML file

    Returns:
        ScenarioConfig with defaults filled in, solver defaults from settings

    Raises:
        ConfigError: On unreadable files, TOML syntax errors (with line
            number), unknown keys (with the nearest valid key) and
            out-of-range values
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    return parse_config_text(text, source=str(path))


def parse_config_text(text: str, source: str = "<string>") -> ScenarioConfig:
    """Validate scenario text; see parse_config."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _LINE_PATTERN.search(str(e))
        raise ConfigError(
            f"syntax error in {source}: {e}", line=int(match.group(1)) if match else None
        ) from e
    try:
        config = ScenarioConfig.model_validate(raw)
    except ValidationError as e:
        raise _config_error(e, text) from e
    config = config.model_copy(update={"solver": config.solver.resolved()})
    logger.info(f"Loaded scenario '{config.name}' from {source}")
    return config
