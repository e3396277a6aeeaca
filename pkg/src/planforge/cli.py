"""Command-line interface for the floor-plan generation pipeline."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import fpop
from .epsap import EsParams, evaluate, evolve
from .eplus import RunConfig, run_simulation
from .errors import PlanforgeError
from .idf.emitter import emit_idf
from .program import validate_program
from .project import load_project, save_project
from .reporting import cost_summary
from .service import (
    parse_period,
    simulate_surrogate,
    systems_spec_from_project,
    weather_for,
)
from .solution import SolutionRecord


@click.group()
def main():
    """Floor-plan generation, thermal evaluation and EnergyPlus export."""


def _load(project_path):
    return load_project(project_path)


def _best_solution(project, solution_id=None):
    solutions = project.solutions
    if not solutions:
        raise click.ClickException(
            "project has no solutions yet; run 'generate' first")
    if solution_id is None:
        return min(solutions, key=lambda s: (s.fitness, s.solution_id))
    for s in solutions:
        if s.solution_id == solution_id:
            return s
    raise click.ClickException(f"no solution '{solution_id}'")


def _fail(exc):
    raise click.ClickException(str(exc))


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True))
def validate(project_path):
    """Check the project's space program; exit non-zero on errors."""
    try:
        project = _load(project_path)
        report = validate_program(project.program)
    except PlanforgeError as exc:
        _fail(exc)
    for issue in report.issues:
        click.echo(f"{issue.severity}: {issue.message}")
    if not report.ok:
        sys.exit(1)
    click.echo("ok")


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True))
@click.option("--seed", default=0, show_default=True)
@click.option("--n-solutions", default=5, show_default=True)
@click.option("--out", type=click.Path(), default=None,
              help="Write results here instead of updating the project.")
def generate(project_path, seed, n_solutions, out):
    """Generate floor plans for the project's space program."""
    try:
        project = _load(project_path)
        report = validate_program(project.program)
        if not report.ok:
            _fail("; ".join(i.message for i in report.errors))
        solutions = evolve(project.program, EsParams(seed=seed),
                           n_solutions=n_solutions)
        project.set_solutions(solutions)
        save_project(project, out or project_path)
    except PlanforgeError as exc:
        _fail(exc)
    for s in solutions:
        click.echo(f"{s.solution_id}  fitness={s.fitness:.6f}")


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True))
@click.option("--solution", "solution_id", default=None)
@click.option("--eplus", "eplus_path", default=None,
              help="Path to an EnergyPlus executable; omit for the "
                   "built-in surrogate.")
@click.option("--epw", "epw_path", type=click.Path(exists=True),
              default=None)
@click.option("--out", type=click.Path(), default=None,
              help="Write the hourly series as JSON.")
def simulate(project_path, solution_id, eplus_path, epw_path, out):
    """Simulate a solution with the surrogate or an external EnergyPlus."""
    try:
        project = _load(project_path)
        solution = _best_solution(project, solution_id)
        if eplus_path:
            idf = emit_idf(solution.layout,
                           systems_spec_from_project(project),
                           site=project.program.site)
            workdir = Path(out or ".") / "eplus-run"
            result = run_simulation(idf, RunConfig(
                executable=eplus_path, working_dir=str(workdir),
                weather_file=epw_path or ""))
            series = result.series
        else:
            params = {"epw_path": epw_path} if epw_path else {}
            series = simulate_surrogate(project, solution,
                                        weather_for(project, params))
    except PlanforgeError as exc:
        _fail(exc)
    payload = {f"{v}/{k}": entry for (v, k), entry in sorted(series.items())}
    if out:
        Path(out).write_text(json.dumps(payload))
        click.echo(f"wrote {out}")
    else:
        for name, entry in payload.items():
            values = entry["values"]
            click.echo(f"{name} [{entry['units']}]  "
                       f"mean={sum(values) / len(values):.3f}")


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True))
@click.option("--solution", "solution_id", default=None)
@click.option("--passes", default=1, show_default=True)
@click.option("--objective", default="surrogate", show_default=True,
              type=click.Choice(["surrogate", "energyplus"]))
@click.option("--out", type=click.Path(), default=None)
def optimize(project_path, solution_id, passes, objective, out):
    """Improve a solution's thermal objective by coordinate search."""
    if objective != "surrogate":
        _fail("the 'energyplus' objective needs an external evaluator; "
              "only 'surrogate' runs from the CLI")
    try:
        project = _load(project_path)
        solution = _best_solution(project, solution_id)
        strategy = fpop.default_strategy(solution.layout)
        strategy = fpop.OptimizationStrategy(strategy.variables,
                                             passes=passes,
                                             objective=strategy.objective)
        result = fpop.optimize_sequential(
            solution.layout, strategy, project.program,
            weather_for(project))
        improved = evaluate(result["layout"], project.program)
        record = SolutionRecord.from_layout(
            improved.layout, improved.fitness, improved.penalty_breakdown,
            {"optimized_from": solution.solution_id,
             "accepted_moves": len(result["trace"])})
        others = [s for s in project.solutions
                  if s.solution_id != record.solution_id]
        project.set_solutions(others + [record])
        save_project(project, out or project_path)
    except PlanforgeError as exc:
        _fail(exc)
    click.echo(f"{record.solution_id}  accepted={len(result['trace'])}")


@main.command("export-idf")
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True))
@click.option("--solution", "solution_id", default=None)
@click.option("--out", type=click.Path(), default=None)
def export_idf(project_path, solution_id, out):
    """Emit the EnergyPlus input file for a feasible solution."""
    try:
        project = _load(project_path)
        solution = _best_solution(project, solution_id)
        if solution.fitness != 0:
            _fail(f"solution is not feasible (fitness {solution.fitness})")
        text = emit_idf(solution.layout,
                        systems_spec_from_project(project),
                        costs=(project.settings or {}).get("costs"),
                        site=project.program.site,
                        north_angle=project.program.site.north_angle)
    except PlanforgeError as exc:
        _fail(exc)
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True))
@click.option("--solution", "solution_id", default=None)
@click.option("--variable", required=True)
@click.option("--key", default="")
@click.option("--period", default="all_year", show_default=True)
@click.option("--format", "fmt", default="summary", show_default=True,
              type=click.Choice(["summary", "csv"]))
@click.option("--out", type=click.Path(), default=None)
def report(project_path, solution_id, variable, key, period, fmt, out):
    """Aggregate a simulated variable over a report period."""
    from .reporting import aggregate_report
    try:
        project = _load(project_path)
        solution = _best_solution(project, solution_id)
        weather = weather_for(project)
        series = simulate_surrogate(project, solution, weather)
        if (variable, key) not in series:
            available = ", ".join(sorted(f"{v}/{k}" for v, k in series))
            _fail(f"variable {variable!r} key {key!r} not available; "
                  f"choose from: {available}")
        entry = series[(variable, key)]
        rep = aggregate_report(entry["values"], weather,
                               parse_period(period), variable=variable,
                               key=key, units=entry["units"])
    except PlanforgeError as exc:
        _fail(exc)
    if fmt == "csv":
        text = rep.to_csv()
        if out:
            Path(out).write_text(text)
            click.echo(f"wrote {out}")
        else:
            click.echo(text, nl=False)
    else:
        agg = rep.aggregates
        click.echo(f"{variable} [{rep.units}]  period={rep.period.label}  "
                   f"hours={len(rep.hours)}")
        click.echo(f"sum={agg['sum']:.3f}  mean={agg['mean']:.3f}  "
                   f"min={agg['min']:.3f}  max={agg['max']:.3f}")


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True))
def costs(project_path):
    """Print the project's cost summary grouped by type."""
    try:
        project = _load(project_path)
        summary = cost_summary(project.data)
    except PlanforgeError as exc:
        _fail(exc)
    for item in summary.items:
        click.echo(f"{item.type:13s} {item.name:20s} "
                   f"{item.quantity:g} x {item.unit_cost:g} = "
                   f"{item.total:g}")
    for kind, total in sorted(summary.totals_by_type.items()):
        click.echo(f"total {kind}: {total:g}")
    click.echo(f"grand total: {summary.grand_total:g}")


@main.command()
@click.option("--root", type=click.Path(), default="./planforge-projects",
              show_default=True, help="Directory holding project files.")
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(root, port, host):
    """Run the HTTP service for the companion UI."""
    import uvicorn

    from .service import ProjectStore, create_app
    app = create_app(ProjectStore(root))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
