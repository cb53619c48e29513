"""Rich console summary of a run report."""

from typing import Optional
import math

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from absentia.cli.report import RunReport

VERDICT_STYLES = {
    "certified": "green",
    "not_certified": "yellow",
    "inapplicable": "dim",
}


def _fmt(value: Optional[float], spec: str = ".6g") -> str:
    if value is None:
        return "-"
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return format(value, spec)


class ReportSummary:
    """Tables of certificates, spectra, Hardy probes and identity residuals."""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()

    def render(self, report: RunReport, title: str = "") -> None:
        """Print every section the report carries."""
        heading = title or report.scenario.get("name", "scenario")
        self.console.print(
            Panel(Text(f"{heading} · {report.command}", style="bold white"), style="cyan")
        )
        if report.certificates:
            self.console.print(self._certificate_table(report.certificates))
        if report.spectra:
            self.console.print(self._spectrum_table(report.spectra))
        if report.hardy_probes:
            self.console.print(self._hardy_table(report.hardy_probes))
        if report.identity_residuals:
            self.console.print(self._identity_table(report.identity_residuals))
        for task, message in sorted(report.errors.items()):
            self.console.print(f"[red]{task}: {message}[/red]")

    def _certificate_table(self, sweep: dict) -> Table:
        table = Table(title=f"Certificate {sweep['theorem_id']}")
        table.add_column("r_max", style="cyan", justify="right")
        table.add_column("Budget", style="white", justify="right")
        table.add_column("Margin", style="white", justify="right")
        table.add_column("Verdict")

        for step in sweep["steps"]:
            cert = step["certificate"]
            table.add_row(
                _fmt(step["r_max"], "g"),
                _fmt(cert["budget_value"]),
                _fmt(cert["margin"]),
                Text(cert["verdict"], style=VERDICT_STYLES.get(cert["verdict"], "white")),
            )
        final = sweep.get("final")
        if final:
            verdict = final["verdict"]
            table.add_row(
                "[bold]final[/bold]",
                _fmt(final["budget_value"]),
                _fmt(final["margin"]),
                Text(verdict.upper(), style=f"bold {VERDICT_STYLES.get(verdict, 'white')}"),
            )
            for failure in final["failures"]:
                table.add_row("", "", "", Text(failure, style="dim"))
        return table

    def _spectrum_table(self, spectra: dict) -> Table:
        stabilization = spectra.get("stabilization") or {}
        verdict = stabilization.get("verdict")
        title = "Lowest eigenvalues" + (f" ({verdict})" if verdict else "")
        table = Table(title=title)
        table.add_column("r_max", style="cyan", justify="right")
        table.add_column("λ₁", style="green", justify="right")
        table.add_column("Residual", style="dim", justify="right")
        table.add_column("Converged")

        for solve in spectra["solves"]:
            eigenvalues = solve["eigenvalues"]
            table.add_row(
                _fmt(solve["r_max"], "g"),
                _fmt(eigenvalues[0] if eigenvalues else None, ".8g"),
                _fmt(solve["residual_norms"][0] if eigenvalues else None, ".2e"),
                "yes" if solve["converged"] else "[red]no[/red]",
            )
        return table

    def _hardy_table(self, hardy: dict) -> Table:
        table = Table(title="Hardy probes")
        table.add_column("Probe", style="cyan")
        table.add_column("Constant", style="green", justify="right")
        table.add_column("Reference", style="white", justify="right")
        table.add_column("Status")

        for probe in hardy["probes"]:
            if probe["skipped"]:
                status = Text("skipped", style="dim")
            elif probe["satisfied"]:
                status = Text("satisfied", style="green")
            else:
                status = Text("violated", style="red")
            table.add_row(
                probe["probe_id"],
                _fmt(probe["computed_constant"]),
                _fmt(probe["reference_bound"]),
                status,
            )
        return table

    def _identity_table(self, identities: dict) -> Table:
        report = identities["report"]
        table = Table(title=f"Identity residuals ({report['pair']})")
        table.add_column("Identity", style="cyan")
        table.add_column("Choice", style="white")
        table.add_column("Relative", style="green", justify="right")
        table.add_column("Order", style="dim", justify="right")

        for entry in report["entries"]:
            table.add_row(
                entry["identity"],
                entry["choice"],
                _fmt(entry["relative_residual"], ".2e"),
                _fmt(entry["order"], ".2f"),
            )
        if report.get("discrete_residual") is not None:
            table.add_row("discrete", "", _fmt(report["discrete_residual"], ".2e"), "")
        return table
