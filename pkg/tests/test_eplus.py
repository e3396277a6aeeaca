"""External-simulator client, exercised with stub executables."""

import os
import stat
import textwrap

import pytest

from planforge.eplus import (
    ENV_EXECUTABLE,
    RunConfig,
    SimulationOutput,
    parse_outputs,
    render_outputs,
    run_simulation,
)
from planforge.errors import (
    ExecutableNotFound,
    MalformedOutput,
    SimulationFailed,
    SimulationTimeout,
)

CSV_SMALL = (
    "Date/Time,Z-0-BED:Zone Mean Air Temperature [C](Hourly)\n"
    " 01/01  01:00:00,20.5\n"
    " 01/01  02:00:00,20.25\n")


def make_stub(path, body):
    path.write_text("#!/bin/sh\n" + textwrap.dedent(body))
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


class TestParseOutputs:
    def test_small_fixture(self):
        out = parse_outputs(CSV_SMALL)
        entry = out.variable("Zone Mean Air Temperature", "Z-0-BED")
        assert entry["values"] == [20.5, 20.25]
        assert entry["units"] == "C"
        assert out.keys_for("Zone Mean Air Temperature") == ["Z-0-BED"]

    def test_empty_text_rejected(self):
        with pytest.raises(MalformedOutput):
            parse_outputs("")

    def test_bad_header_rejected(self):
        with pytest.raises(MalformedOutput):
            parse_outputs("Time,Z:V [C](Hourly)\n1,2\n")

    def test_unparsable_column_rejected(self):
        with pytest.raises(MalformedOutput):
            parse_outputs("Date/Time,garbage column\n1,2\n")

    def test_ragged_row_rejected(self):
        with pytest.raises(MalformedOutput):
            parse_outputs(CSV_SMALL + " 01/01  03:00:00,1.0,2.0\n")

    def test_non_numeric_rejected(self):
        with pytest.raises(MalformedOutput):
            parse_outputs(CSV_SMALL.replace("20.25", "n/a"))

    def test_render_parse_round_trip(self):
        out = parse_outputs(CSV_SMALL)
        again = parse_outputs(render_outputs(out))
        assert again.series == out.series

    def test_column_sums_match_line_by_line(self):
        """8760-row fixture: independent summation oracle."""
        values = [0.1 * (h % 240) for h in range(8760)]
        fixture = SimulationOutput(
            {("Zone Mean Air Temperature", "Z"): {
                "values": values, "units": "C"}})
        text = render_outputs(fixture)
        parsed = parse_outputs(text)
        parsed_vals = parsed.variable("Zone Mean Air Temperature",
                                      "Z")["values"]
        assert len(parsed_vals) == 8760
        oracle = 0.0
        for line in text.splitlines()[1:]:
            oracle += float(line.split(",")[1])
        assert sum(parsed_vals) == pytest.approx(oracle, rel=1e-12)


class TestRunConfig:
    def test_timeout_must_be_positive(self):
        with pytest.raises(ValueError):
            RunConfig(timeout=0)

    def test_env_override_wins(self, monkeypatch):
        monkeypatch.setenv(ENV_EXECUTABLE, "/opt/ep/energyplus")
        assert RunConfig(executable="/usr/bin/other").resolved_executable() \
            == "/opt/ep/energyplus"

    def test_falls_back_to_config(self, monkeypatch):
        monkeypatch.delenv(ENV_EXECUTABLE, raising=False)
        assert RunConfig(executable="/usr/bin/ep").resolved_executable() == \
            "/usr/bin/ep"


class TestRunSimulation:
    def test_missing_executable(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_EXECUTABLE, raising=False)
        with pytest.raises(ExecutableNotFound):
            run_simulation("Version,8.8;\n", RunConfig(
                executable=str(tmp_path / "nope"),
                working_dir=str(tmp_path)))

    def test_stub_writes_csv(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_EXECUTABLE, raising=False)
        workdir = tmp_path / "run"
        stub = make_stub(tmp_path / "ep.sh", f"""\
            cat > "$PWD/eplusout.csv" <<'EOF'
            Date/Time,ZA:Zone Mean Air Temperature [C](Hourly),ZB:Zone Mean Air Temperature [C](Hourly)
            1,20.0,21.0
            2,20.5,21.5
            EOF
            """)
        out = run_simulation("Version,8.8;\n", RunConfig(
            executable=stub, working_dir=str(workdir)))
        assert len(out.series) == 2
        assert out.variable("Zone Mean Air Temperature",
                            "ZA")["values"] == [20.0, 20.5]
        assert (workdir / "in.idf").read_text() == "Version,8.8;\n"
        assert (workdir / "run.log").exists()

    def test_sleeping_stub_times_out(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_EXECUTABLE, raising=False)
        stub = make_stub(tmp_path / "slow.sh", "sleep 30\n")
        with pytest.raises(SimulationTimeout):
            run_simulation("Version,8.8;\n", RunConfig(
                executable=stub, working_dir=str(tmp_path / "w"),
                timeout=1.0))

    def test_severe_errors_fail_with_excerpt(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_EXECUTABLE, raising=False)
        stub = make_stub(tmp_path / "bad.sh", """\
            cat > "$PWD/eplusout.err" <<'EOF'
            ** Severe  ** Node connection missing
            **  Fatal  ** Preceding condition causes termination
            EOF
            exit 1
            """)
        with pytest.raises(SimulationFailed) as err:
            run_simulation("Version,8.8;\n", RunConfig(
                executable=stub, working_dir=str(tmp_path / "w")))
        assert "Node connection missing" in err.value.log_excerpt

    def test_missing_csv_is_failure(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_EXECUTABLE, raising=False)
        stub = make_stub(tmp_path / "noout.sh", "exit 0\n")
        with pytest.raises(SimulationFailed):
            run_simulation("Version,8.8;\n", RunConfig(
                executable=stub, working_dir=str(tmp_path / "w")))
