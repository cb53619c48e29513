"""absentia CLI - certify, probe and cross-check magnetic Schrödinger scenarios."""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional
import logging

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from absentia.config import get_settings

app = typer.Typer(
    name="absentia",
    help="Absence-of-eigenvalues certification for 2D magnetic Schrödinger operators",
    no_args_is_help=True,
)
console = Console()

ConfigOption = typer.Option(
    ..., "--config", "-c", help="Scenario file (TOML); repeat for a batch", exists=True
)
OutOption = typer.Option(None, "--out", "-o", help="Report directory")
SeedOption = typer.Option(None, "--seed", help="Seed of the eigen-solves")
DumpOption = typer.Option(False, "--dump-matrix", help="Write the Hamiltonian (Matrix Market)")
LogOption = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR")


def setup_logging(level: Optional[str]) -> None:
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _run_batch(
    command: str,
    configs: list[Path],
    out: Optional[Path],
    seed: Optional[int],
    dump_matrix: bool,
    log_level: Optional[str],
) -> None:
    """Run a command on every scenario; exit 1 on any operational failure."""
    from absentia.cli.scenario import parse_config
    from absentia.cli.summary import ReportSummary
    from absentia.cli.tasks import run
    from absentia.errors import AbsentiaError

    setup_logging(log_level)

    def one(path: Path) -> bool:
        config = parse_config(path)
        base = out or Path(config.output.dir or get_settings().output_dir)
        out_dir = base / path.stem if len(configs) > 1 else base
        outcome = run(command, config, out_dir, seed=seed, dump_matrix=dump_matrix)
        ReportSummary(console).render(outcome.report, title=config.name)
        console.print(f"[dim]Report: {outcome.paths[0]}[/dim]")
        return outcome.failed

    failed = False
    with ThreadPoolExecutor(max_workers=max(1, min(len(configs), 4))) as pool:
        futures = {path: pool.submit(one, path) for path in configs}
        for path, future in futures.items():
            try:
                failed = future.result() or failed
            except (AbsentiaError, OSError) as e:
                console.print(f"[red]{path}: {e}[/red]")
                failed = True

    if failed:
        raise typer.Exit(1)


@app.command()
def certify(
    config: list[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    dump_matrix: bool = DumpOption,
    log_level: Optional[str] = LogOption,
):
    """Compute subordination constants and check the theorem's budget."""
    _run_batch("certify", config, out, seed, dump_matrix, log_level)


@app.command()
def spectrum(
    config: list[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    dump_matrix: bool = DumpOption,
    log_level: Optional[str] = LogOption,
):
    """Lowest eigenvalues on growing disks and their stabilization verdict."""
    _run_batch("spectrum", config, out, seed, dump_matrix, log_level)


@app.command()
def hardy(
    config: list[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    dump_matrix: bool = DumpOption,
    log_level: Optional[str] = LogOption,
):
    """Discrete Hardy constants against their continuum references."""
    _run_batch("hardy", config, out, seed, dump_matrix, log_level)


@app.command()
def identities(
    config: list[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    dump_matrix: bool = DumpOption,
    log_level: Optional[str] = LogOption,
):
    """Multiplier-identity residuals on a manufactured eigenpair."""
    _run_batch("identities", config, out, seed, dump_matrix, log_level)


@app.command(name="all")
def run_all(
    config: list[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    dump_matrix: bool = DumpOption,
    log_level: Optional[str] = LogOption,
):
    """Certificates, spectra, Hardy probes and identity residuals in one report."""
    _run_batch("all", config, out, seed, dump_matrix, log_level)


@app.command()
def profiles():
    """List field profiles, potential terms, theorems and Hardy probes."""
    from absentia.certify.budget import TheoremId
    from absentia.fields.registry import get_profile_registry
    from absentia.hardy.probes import InequalityId

    names = get_profile_registry().names()
    table = Table(title="Scenario vocabulary")
    table.add_column("Kind", style="cyan")
    table.add_column("Names", style="green")

    table.add_row("[field] profile", ", ".join(names["fields"]))
    table.add_row("[[potential.terms]] kind", ", ".join(names["terms"]))
    table.add_row("[certify] theorem", ", ".join(t.value for t in TheoremId))
    table.add_row("[hardy] probes", ", ".join(p.value for p in InequalityId))
    console.print(table)


def main():
    """Main entry point."""
    app()


if __name__ == "__main__":
    main()
