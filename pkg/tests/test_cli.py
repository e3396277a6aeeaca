"""Command-line interface, exercised through click's test runner."""

import json

import pytest
from click.testing import CliRunner

from planforge.cli import main

from conftest import EXAMPLE_NAMES, example_project


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def project_path(tmp_path):
    path = tmp_path / "house.json"
    path.write_text(json.dumps(example_project(EXAMPLE_NAMES[0])))
    return str(path)


def run(runner, *args):
    result = runner.invoke(main, list(args), catch_exceptions=False)
    return result


class TestValidate:
    def test_valid_project(self, runner, project_path):
        result = run(runner, "validate", "--project", project_path)
        assert result.exit_code == 0
        assert "ok" in result.output

    def test_invalid_program_exits_nonzero(self, runner, tmp_path):
        data = example_project(EXAMPLE_NAMES[0])
        data["program"]["spaces"].append(
            dict(data["program"]["spaces"][0]))  # duplicate id
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        result = run(runner, "validate", "--project", str(path))
        assert result.exit_code == 1
        assert "duplicate" in result.output

    def test_missing_file(self, runner):
        result = runner.invoke(main, ["validate", "--project", "no.json"])
        assert result.exit_code != 0


class TestGenerateAndDownstream:
    @pytest.fixture
    def generated(self, runner, project_path):
        result = run(runner, "generate", "--project", project_path,
                     "--seed", "1", "--n-solutions", "2")
        assert result.exit_code == 0, result.output
        return project_path

    def test_generate_writes_solutions(self, runner, generated):
        data = json.loads(open(generated).read())
        assert len(data["layouts"]) == 2
        fits = [s["fitness"] for s in data["layouts"]]
        assert fits == sorted(fits)

    def test_simulate_surrogate_summary(self, runner, generated):
        result = run(runner, "simulate", "--project", generated)
        assert result.exit_code == 0, result.output
        assert "Zone Mean Air Temperature" in result.output
        assert "mean=" in result.output

    def test_export_idf(self, runner, generated, tmp_path):
        out = tmp_path / "model.idf"
        result = run(runner, "export-idf", "--project", generated,
                     "--out", str(out))
        assert result.exit_code == 0, result.output
        text = out.read_text()
        assert text.startswith("Version,")

    def test_report_csv(self, runner, generated):
        result = run(runner, "report", "--project", generated,
                     "--variable", "Zone Mean Air Temperature",
                     "--key", "Z-0-hall", "--period", "trimester 1",
                     "--format", "csv")
        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()
        assert lines[0] == "hour,value"
        assert len(lines) == 2161

    def test_report_summary(self, runner, generated):
        result = run(runner, "report", "--project", generated,
                     "--variable", "Zone Mean Air Temperature",
                     "--key", "Z-0-hall")
        assert result.exit_code == 0, result.output
        assert "sum=" in result.output and "mean=" in result.output

    def test_optimize_records_provenance(self, runner, generated):
        result = run(runner, "optimize", "--project", generated)
        assert result.exit_code == 0, result.output
        data = json.loads(open(generated).read())
        assert any("optimized_from" in s.get("provenance", {})
                   for s in data["layouts"])

    def test_costs(self, runner, generated):
        result = run(runner, "costs", "--project", generated)
        assert result.exit_code == 0, result.output
        assert "grand total: 11100" in result.output


class TestErrors:
    def test_simulate_without_solutions(self, runner, project_path):
        result = runner.invoke(main, ["simulate", "--project", project_path])
        assert result.exit_code != 0
        assert "generate" in result.output

    def test_energyplus_objective_needs_external_evaluator(self, runner,
                                                           project_path):
        result = runner.invoke(main, ["optimize", "--project", project_path,
                                      "--objective", "energyplus"])
        assert result.exit_code != 0
