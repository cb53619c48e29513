"""Commands as tasks over one scenario, and the runner that writes their report."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Optional
import logging

from absentia.certify.sweep import certify_scenario
from absentia.cli.report import RunReport, write_report
from absentia.cli.scenario import Scenario, ScenarioConfig
from absentia.errors import AbsentiaError
from absentia.forms.assembly import assemble_dirichlet_form, hamiltonian_form, potential_mass
from absentia.hardy.probes import (
    HardyProbeResult,
    InequalityId,
    ProbeRejected,
    ab_probe,
    ab_weighted_probe,
    ck_probe,
    circle_probe,
    hp_disk_probe,
    lw_probe,
    sweep_probe,
    weighted_classical_probe,
)
from absentia.identities.manufactured import Decomposition, GaussianMode, SplitSpec, manufacture
from absentia.identities.residuals import (
    IdentityResidualReport,
    complex_lambda_terms,
    discrete_residual,
    residual_crucial_ss,
    residual_G1,
    residual_G2,
    residual_G3,
)
from absentia.mesh.grid import PolarGrid
from absentia.solvers.eigen import smallest_eigs
from absentia.solvers.stability import SpectralScenario, stabilization_probe

logger = logging.getLogger(__name__)


@dataclass
class TaskStats:
    """Bookkeeping of one task run."""

    errors: int = 0
    unconverged: int = 0
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None
    last_error: Optional[str] = None

    @property
    def duration_seconds(self) -> float:
        if self.started_at and self.completed_at:
            return (self.completed_at - self.started_at).total_seconds()
        return 0.0

    @property
    def failed(self) -> bool:
        return self.errors > 0 or self.unconverged > 0

    def as_dict(self) -> dict:
        return {
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
            "duration_seconds": self.duration_seconds,
        }


class ScenarioTask(ABC):
    """One command applied to one scenario.

    Subclasses set ``task_name`` and ``report_key`` and implement
    ``execute``, returning the JSON-ready section of the report. ``run``
    records timing, turns module errors into report entries, and counts
    solves that did not converge.

    Usage:
        task = CertifyTask(scenario, seed=7)
        section = task.run()
        if task.stats.failed:
            ...
    """

    task_name: str = "base"
    report_key: str = "base"

    def __init__(self, scenario: Scenario, seed: Optional[int] = None):
        self.scenario = scenario
        self.config = scenario.config
        self.seed = self.config.solver.seed if seed is None else seed
        self._stats = TaskStats()

    @property
    def stats(self) -> TaskStats:
        return self._stats

    @abstractmethod
    def execute(self) -> dict:
        raise NotImplementedError

    def run(self) -> Optional[dict]:
        self._stats = TaskStats(started_at=datetime.now(timezone.utc))
        logger.info(f"Starting {self.task_name} on '{self.config.name}'")
        try:
            section = self.execute()
        except AbsentiaError as e:
            self._stats.errors += 1
            self._stats.last_error = f"{type(e).__name__}: {e}"
            logger.error(f"{self.task_name} failed: {e}")
            section = None
        finally:
            self._stats.completed_at = datetime.now(timezone.utc)
        if self._stats.unconverged:
            logger.warning(f"{self.task_name}: {self._stats.unconverged} solve(s) did not converge")
        logger.info(f"Finished {self.task_name} in {self._stats.duration_seconds:.1f}s")
        return section


class CertifyTask(ScenarioTask):
    task_name = "certify"
    report_key = "certificates"

    def execute(self) -> dict:
        cfg = self.config.certify
        sweep = certify_scenario(
            self.scenario.field,
            self.scenario.potential,
            self.scenario.grid_spec,
            theorem=cfg.theorem,
            radii=cfg.radii,
            route=cfg.route,
            epsilon=cfg.epsilon,
            d=cfg.d,
            seed=self.seed,
        )
        for step in sweep.steps:
            self._stats.unconverged += sum(
                1 for ok in step.report.constants.converged.values() if not ok
            )
            if step.obvious is not None and not step.obvious.converged:
                self._stats.unconverged += 1
        return sweep.as_dict()


class SpectrumTask(ScenarioTask):
    task_name = "spectrum"
    report_key = "spectra"

    def execute(self) -> dict:
        cfg = self.config.spectrum
        spectral = SpectralScenario(
            self.scenario.field, self.scenario.potential, self.scenario.grid_spec
        )
        radii = sorted(cfg.radii or [self.scenario.grid_spec.r_max])
        k = cfg.k or 1

        if len(radii) >= 2:
            report = stabilization_probe(spectral, radii, k=k, seed=self.seed)
            results, stabilization = report.results, report.as_dict()
            stabilization.pop("solves")
        else:
            _, h, m = spectral.assemble(radii[0])
            results = [smallest_eigs(h, m, k=k, seed=self.seed)]
            stabilization = None

        self._stats.unconverged += sum(1 for r in results if not r.converged)
        solves = [{"r_max": r_max, **r.as_dict()} for r_max, r in zip(radii, results)]
        return {"radii": radii, "k": k, "stabilization": stabilization, "solves": solves}


class HardyTask(ScenarioTask):
    task_name = "hardy"
    report_key = "hardy_probes"

    def _default_probes(self) -> list[InequalityId]:
        if self.scenario.field.is_ab:
            return [InequalityId.AB, InequalityId.AB_WEIGHTED, InequalityId.CIRCLE]
        return [InequalityId.LW, InequalityId.CK]

    def _grid_probe(
        self, probe_id: InequalityId
    ) -> Optional[Callable[[PolarGrid], HardyProbeResult]]:
        """Probe as a function of the grid, or None for grid-free probes."""
        cfg = self.config.hardy
        field = self.scenario.field
        tol = cfg.tol_mesh
        if probe_id is InequalityId.WEIGHTED_CLASSICAL:
            return lambda g: weighted_classical_probe(cfg.dimension, g, tol)
        if probe_id in (InequalityId.LW, InequalityId.CK, InequalityId.TILDE_CK):
            if field.profile is None:
                raise ProbeRejected(f"{probe_id.value} needs a radial field profile")
            if probe_id is InequalityId.LW:
                return lambda g: lw_probe(field.profile, g, tol)
            choice = "log_weight" if probe_id is InequalityId.CK else "plain_weight"
            return lambda g: ck_probe(field.profile, g, choice, tol)
        if probe_id in (InequalityId.AB, InequalityId.AB_WEIGHTED):
            if field.alpha is None:
                raise ProbeRejected(f"{probe_id.value} needs an Aharonov–Bohm field")
            if probe_id is InequalityId.AB:
                return lambda g: ab_probe(field.alpha, g, tol)
            return lambda g: ab_weighted_probe(field.alpha, g, tol)
        return None

    def _single(self, probe_id: InequalityId) -> HardyProbeResult:
        cfg = self.config.hardy
        if probe_id is InequalityId.HP_DISK:
            return hp_disk_probe(cfg.hp_radius, n_r=cfg.hp_n_r, n_theta=cfg.hp_n_theta)
        if self.scenario.field.alpha is None:
            raise ProbeRejected("circle probe needs an Aharonov–Bohm field")
        return circle_probe(self.scenario.field.alpha, cfg.n_modes)

    def execute(self) -> dict:
        cfg = self.config.hardy
        base = self.scenario.grid_spec.build()
        probes: list[dict] = []
        sweeps: list[dict] = []
        for probe_id in cfg.probes or self._default_probes():
            try:
                probe = self._grid_probe(probe_id)
                if probe is None:
                    results = [(probe_id.value, self._single(probe_id))]
                elif cfg.radii:
                    sweep = sweep_probe(probe, base, cfg.radii)
                    sweeps.append(sweep.as_dict())
                    results = [
                        (f"{probe_id.value}@r_max={r:g}", res)
                        for r, res in zip(sweep.radii, sweep.results)
                    ]
                else:
                    results = [(probe_id.value, probe(base))]
            except ProbeRejected as e:
                logger.warning(f"Probe {probe_id.value} skipped: {e}")
                results = [(probe_id.value, _skipped(probe_id, str(e)))]
            for label, result in results:
                self._stats.unconverged += 0 if result.converged else 1
                probes.append({"probe_id": label, **result.as_dict()})
        return {"probes": probes, "sweeps": sweeps}


def _skipped(probe_id: InequalityId, notice: str) -> HardyProbeResult:
    return HardyProbeResult(
        inequality_id=probe_id,
        computed_constant=float("inf"),
        reference_bound=0.0,
        grid_params={},
        tol_mesh=0.0,
        skipped=True,
        notice=notice,
    )


class IdentitiesTask(ScenarioTask):
    task_name = "identities"
    report_key = "identity_residuals"

    def execute(self) -> dict:
        cfg = self.config.identities
        mode = GaussianMode(a=cfg.a, ell=cfg.ell, amplitude=cfg.amplitude)
        pair = manufacture(mode, self.scenario.field.vector_potential(), lam=cfg.lam)
        label = (
            f"field={self.config.field.profile} a={cfg.a:g} ell={cfg.ell} lam={cfg.lam:g}"
        )
        split = SplitSpec(Decomposition(cfg.decomposition), cfg.split_radius, cfg.split_width)

        evaluators = {
            "G1": lambda: residual_G1(pair, cfg.g1_multiplier, cfg.n_r),
            "G2": lambda: residual_G2(pair, cfg.g2_multiplier, cfg.n_r),
            "G3": lambda: residual_G3(pair, cfg.n_r),
            "crucial_ss": lambda: residual_crucial_ss(pair, split, cfg.n_r),
        }
        report = IdentityResidualReport(pair=label)
        for name in cfg.identities:
            report.entries.append(evaluators[name]())
        if cfg.discrete:
            report.discrete_residual = discrete_residual(pair, self.scenario.grid_spec.build())

        section: dict[str, Any] = {
            "equation_residual": pair.equation_residual,
            "report": report.as_dict(),
        }
        if cfg.complex_lambda is not None:
            lam = complex(*cfg.complex_lambda)
            section["complex_lambda_terms"] = {
                "lambda": [lam.real, lam.imag],
                "terms": complex_lambda_terms(pair, lam, cfg.n_r),
            }
        return section


TASKS: dict[str, type[ScenarioTask]] = {
    "certify": CertifyTask,
    "spectrum": SpectrumTask,
    "hardy": HardyTask,
    "identities": IdentitiesTask,
}

COMMANDS: dict[str, tuple[str, ...]] = {
    **{name: (name,) for name in TASKS},
    "all": ("certify", "spectrum", "hardy", "identities"),
}


@dataclass
class RunOutcome:
    """A written report and whether any task failed operationally."""

    report: RunReport
    paths: list[Path]
    failed: bool


def _dump_matrix(scenario: Scenario, out_dir: Path) -> Path:
    grid = scenario.grid_spec.build()
    form = assemble_dirichlet_form(scenario.field.vector_potential(), grid)
    if scenario.potential.is_real:
        form = hamiltonian_form(form, potential_mass(scenario.potential.re_values, grid))
    return form.dump(out_dir / "hamiltonian.mtx")


def run(
    command: str,
    config: ScenarioConfig,
    out_dir: Path,
    seed: Optional[int] = None,
    dump_matrix: bool = False,
) -> RunOutcome:
    """Dispatch a command on one scenario and write its report.

    Args:
        command: certify, spectrum, hardy, identities or all
        config: Validated scenario
        out_dir: Directory of report.json and the CSV tables
        seed: Overrides the scenario's solver seed
        dump_matrix: Also write the Hamiltonian of the base grid (Matrix Market)

    Returns:
        RunOutcome; ``failed`` is set by module errors and unconverged solves,
        never by a verdict

    Raises:
        ValueError: For an unknown command
        AbsentiaError: If the scenario's field, potential or grid cannot be built
        OSError: If the report cannot be written
    """
    if command not in COMMANDS:
        raise ValueError(f"Unknown command: {command}")
    scenario = config.build()
    seed = config.solver.seed if seed is None else seed
    report = RunReport(command=command, scenario=config.echo(), seed=seed)

    failed = False
    for name in COMMANDS[command]:
        task = TASKS[name](scenario, seed=seed)
        section = task.run()
        setattr(report, task.report_key, section)
        report.timings[name] = task.stats.as_dict()
        if task.stats.last_error:
            report.errors[name] = task.stats.last_error
        failed = failed or task.stats.failed

    if dump_matrix or config.output.dump_matrix:
        report.artifacts["matrix"] = _dump_matrix(scenario, out_dir).name
    paths = write_report(report, out_dir, config.output)
    return RunOutcome(report, paths, failed)
