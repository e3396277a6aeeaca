"""External EnergyPlus client: run an IDF against an EPW, parse outputs.

The simulator is optional: everything here is testable with stub
executables and canned CSV fixtures. A real run needs only a path to the
EnergyPlus binary (config, --eplus, or the ENERGYPLUS_EXE environment
variable).
"""

from __future__ import annotations

import os
import re
import shutil
import subprocess
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    ExecutableNotFound,
    MalformedOutput,
    SimulationFailed,
    SimulationTimeout,
)

ENV_EXECUTABLE = "ENERGYPLUS_EXE"
DEFAULT_TIMEOUT = 600.0
MAX_CONCURRENT_RUNS = 2

_run_slots = threading.BoundedSemaphore(MAX_CONCURRENT_RUNS)

# column header: "KEY:Variable Name [Units](Hourly)"
_COLUMN_RE = re.compile(
    r"^(?P<key>[^:]*):(?P<variable>[^\[\]]+?)\s*"
    r"\[(?P<units>[^\]]*)\]\((?P<frequency>[^)]*)\)$")


@dataclass(frozen=True)
class RunConfig:
    executable: str = ""
    working_dir: str = "."
    timeout: float = DEFAULT_TIMEOUT
    weather_file: str = ""

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError(f"timeout must be > 0, got {self.timeout}")

    def resolved_executable(self) -> str:
        return os.environ.get(ENV_EXECUTABLE) or self.executable


@dataclass(frozen=True)
class SimulationOutput:
    series: dict  # (variable, key) -> {"values": [...], "units": str}
    log: dict = field(default_factory=lambda: {
        "warnings": 0, "severe_errors": 0, "fatal": 0})

    def variable(self, variable: str, key: str):
        return self.series[(variable, key)]

    def keys_for(self, variable: str) -> list:
        return sorted(k for (v, k) in self.series if v == variable)


def parse_outputs(csv_text: str) -> SimulationOutput:
    """Parse the hourly comma-separated variables file.

    The header row is "Date/Time" followed by columns formatted
    "KEY:Variable Name [Units](Hourly)". Raises MalformedOutput on a
    missing or malformed header, ragged rows, or non-numeric values.
    """
    lines = [ln for ln in csv_text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedOutput("empty output text")
    header = _split_csv(lines[0])
    if not header or header[0].strip() != "Date/Time":
        raise MalformedOutput(
            f"first header column must be 'Date/Time', got "
            f"{header[0].strip() if header else '<nothing>'!r}")
    columns = []
    for col in header[1:]:
        m = _COLUMN_RE.match(col.strip())
        if m is None:
            raise MalformedOutput(f"unparsable column header {col.strip()!r}")
        columns.append((m.group("variable").strip(), m.group("key").strip(),
                        m.group("units").strip()))
    values = [[] for _ in columns]
    for lineno, line in enumerate(lines[1:], 2):
        parts = _split_csv(line)
        if len(parts) != len(columns) + 1:
            raise MalformedOutput(
                f"row {lineno}: {len(parts)} fields, expected "
                f"{len(columns) + 1}")
        for i, raw in enumerate(parts[1:]):
            try:
                values[i].append(float(raw))
            except ValueError:
                raise MalformedOutput(
                    f"row {lineno}: non-numeric value {raw.strip()!r}")
    series = {}
    for (variable, key, units), vals in zip(columns, values):
        series[(variable, key)] = {"values": vals, "units": units}
    return SimulationOutput(series)


def _split_csv(line: str) -> list:
    return line.rstrip("\n").split(",")


def render_outputs(output: SimulationOutput) -> str:
    """Inverse of parse_outputs, used for fixtures and round-trip tests."""
    cols = sorted(output.series)
    header = ["Date/Time"] + [
        f"{key}:{variable} [{output.series[(variable, key)]['units']}]"
        f"(Hourly)" for variable, key in cols]
    n = len(output.series[cols[0]]["values"]) if cols else 0
    lines = [",".join(header)]
    for i in range(n):
        row = [f" {i + 1:05d}"]
        row.extend(repr(output.series[c]["values"][i]) for c in cols)
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _scan_error_log(text: str) -> dict:
    counts = {"warnings": 0, "severe_errors": 0, "fatal": 0}
    for line in text.splitlines():
        if "** Warning **" in line:
            counts["warnings"] += 1
        elif "** Severe  **" in line or "** Severe **" in line:
            counts["severe_errors"] += 1
        elif "**  Fatal  **" in line or "** Fatal **" in line:
            counts["fatal"] += 1
    return counts


def _log_excerpt(text: str, limit: int = 12) -> str:
    bad = [ln for ln in text.splitlines()
           if "Severe" in ln or "Fatal" in ln]
    return "\n".join(bad[:limit])


def run_simulation(idf_text: str, config: RunConfig) -> SimulationOutput:
    """Write the IDF, launch EnergyPlus, parse its hourly CSV output.

    The child runs in config.working_dir with stdout/stderr captured to
    run.log. Expects the executable to leave an "eplusout.csv" (hourly
    variables) and optionally "eplusout.err" (error log) in that
    directory.
    """
    exe = config.resolved_executable()
    if not exe or (not shutil.which(exe) and not Path(exe).is_file()):
        raise ExecutableNotFound(
            f"EnergyPlus executable not found: {exe!r} (set {ENV_EXECUTABLE} "
            f"or pass --eplus)")

    workdir = Path(config.working_dir)
    workdir.mkdir(parents=True, exist_ok=True)
    idf_path = workdir / "in.idf"
    idf_path.write_text(idf_text)

    cmd = [str(exe)]
    if config.weather_file:
        cmd += ["-w", str(config.weather_file)]
    cmd += ["-d", str(workdir), str(idf_path)]

    with _run_slots:
        try:
            proc = subprocess.run(
                cmd, cwd=str(workdir), capture_output=True, text=True,
                timeout=config.timeout)
        except subprocess.TimeoutExpired:
            raise SimulationTimeout(
                f"simulation exceeded {config.timeout} s")
    (workdir / "run.log").write_text(proc.stdout + proc.stderr)

    err_path = workdir / "eplusout.err"
    err_text = err_path.read_text() if err_path.exists() else ""
    log = _scan_error_log(err_text)
    if proc.returncode != 0 or log["fatal"] or log["severe_errors"]:
        raise SimulationFailed(
            f"EnergyPlus exited with code {proc.returncode} "
            f"({log['severe_errors']} severe, {log['fatal']} fatal)",
            log_excerpt=_log_excerpt(err_text) or proc.stderr[-2000:])

    csv_path = workdir / "eplusout.csv"
    if not csv_path.exists():
        raise SimulationFailed(
            "simulation produced no eplusout.csv",
            log_excerpt=_log_excerpt(err_text))
    output = parse_outputs(csv_path.read_text())
    return SimulationOutput(output.series, log)
