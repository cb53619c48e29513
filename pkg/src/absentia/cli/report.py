"""Run reports: one JSON document plus CSV tables for plotting.

Everything except the ``timings`` block is a function of the resolved
scenario, the seed and the toolkit version, so identical runs produce
identical bytes outside that block.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional
import csv
import logging

import orjson

from absentia import __version__
from absentia.cli.scenario import SCHEMA_VERSION, OutputConfig

logger = logging.getLogger(__name__)

EIGENVALUE_COLUMNS = ("r_max", "index", "eigenvalue", "residual")
HARDY_COLUMNS = ("probe_id", "constant", "bound")

JSON_OPTIONS = (
    orjson.OPT_INDENT_2
    | orjson.OPT_SORT_KEYS
    | orjson.OPT_SERIALIZE_NUMPY
    | orjson.OPT_NON_STR_KEYS
)


@dataclass
class RunReport:
    """Results of one command on one scenario."""

    command: str
    scenario: dict
    seed: int
    certificates: Optional[dict] = None
    spectra: Optional[dict] = None
    hardy_probes: Optional[dict] = None
    identity_residuals: Optional[dict] = None
    errors: dict[str, str] = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)
    timings: dict[str, dict] = field(default_factory=dict)
    toolkit_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def as_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "toolkit_version": self.toolkit_version,
            "command": self.command,
            "scenario": self.scenario,
            "seed": self.seed,
            "certificates": self.certificates,
            "spectra": self.spectra,
            "hardy_probes": self.hardy_probes,
            "identity_residuals": self.identity_residuals,
            "errors": self.errors,
            "artifacts": self.artifacts,
            "timings": self.timings,
        }

    def deterministic_dict(self) -> dict:
        """The report without its timings block."""
        out = self.as_dict()
        del out["timings"]
        return out


def _default(obj: Any) -> Any:
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"Type is not JSON serializable: {type(obj).__name__}")


def dumps(payload: dict) -> bytes:
    """Sorted, indented JSON; NaN and infinities become null."""
    return orjson.dumps(payload, default=_default, option=JSON_OPTIONS) + b"\n"


def eigenvalue_rows(spectra: Optional[dict]) -> list[tuple]:
    if not spectra:
        return []
    rows = []
    for solve in spectra.get("solves", []):
        pairs = zip(solve["eigenvalues"], solve["residual_norms"])
        for index, (value, residual) in enumerate(pairs, start=1):
            rows.append((solve["r_max"], index, value, residual))
    return rows


def hardy_rows(hardy: Optional[dict]) -> list[tuple]:
    if not hardy:
        return []
    return [
        (p["probe_id"], p["computed_constant"], p["reference_bound"])
        for p in hardy.get("probes", [])
    ]


def _write_csv(path: Path, columns: tuple[str, ...], rows: Iterable[tuple]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, delimiter=",", lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    return path


def write_report(report: RunReport, out_dir: Path, output: OutputConfig) -> list[Path]:
    """Write report.json and the CSV tables that have rows.

    Returns:
        Paths written, JSON first

    Raises:
        OSError: If the directory or a file cannot be written
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    eigen = eigenvalue_rows(report.spectra)
    if eigen:
        written.append(_write_csv(out_dir / output.eigenvalues_csv, EIGENVALUE_COLUMNS, eigen))
        report.artifacts["eigenvalues"] = output.eigenvalues_csv
    hardy = hardy_rows(report.hardy_probes)
    if hardy:
        written.append(_write_csv(out_dir / output.hardy_csv, HARDY_COLUMNS, hardy))
        report.artifacts["hardy"] = output.hardy_csv

    json_path = out_dir / output.report
    json_path.write_bytes(dumps(report.as_dict()))
    written.insert(0, json_path)
    logger.info(f"Wrote {', '.join(p.name for p in written)} to {out_dir}")
    return written
