"""Project store, job execution and the HTTP API used by the companion UI.

The service is a thin shell: every endpoint defers to the library modules
(generation, surrogate simulation, optimization, IDF emission, reporting),
so responses are reproducible by calling those operations directly. Jobs
for one project run in submission order and the queue is persisted inside
the project file, so a restart loses nothing.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from . import fpop
from .constructions import default_construction_set
from .epsap import EsParams, evaluate, evolve
from .errors import (
    InvalidParams,
    PlanforgeError,
    UnknownProject,
    UnknownSolution,
    UnknownVariable,
)
from .idf.emitter import emit_idf
from .idf.zones import zone_name
from .idf.systems import SystemsSpec
from .layout import layout_to_dict
from .program import validate_program
from .project import Project, load_project, save_project
from .reporting import ReportPeriod, aggregate_report, cost_summary
from .solution import SolutionRecord, solution_to_dict
from .thermal import (
    SetpointBand,
    derive_zone_params,
    simulate_free_float,
    simulate_ideal_loads,
)
from .weather import load_weather, synthetic_weather

JOB_KINDS = ("generate", "simulate", "optimize", "export_idf")


def systems_spec_from_project(project: Project) -> SystemsSpec:
    d = dict(project.systems or {})
    return SystemsSpec(
        hvac=d.get("hvac", "ideal_loads"),
        dhw=d.get("dhw"),
        electric_center=d.get("electric_center"),
        constructions=d.get("constructions", "default"),
        gains=d.get("gains", {}),
        ventilation=d.get("ventilation", {"ach": 0.0}),
    )


def weather_for(project: Project, params: dict = None):
    params = params or {}
    epw_path = params.get("epw_path") or \
        (project.settings or {}).get("epw_path")
    if epw_path:
        return load_weather(Path(epw_path).read_text())
    return synthetic_weather()


def simulate_surrogate(project: Project, solution: SolutionRecord,
                       weather=None) -> dict:
    """Hourly surrogate series keyed (variable, key), mirroring the
    simulator's report variables."""
    weather = weather or weather_for(project)
    program = project.program
    params = derive_zone_params(
        solution.layout, default_construction_set(), ach=float(
            (project.systems or {}).get("ventilation", {}).get("ach", 0.0)),
        north_angle=program.site.north_angle)
    free = simulate_free_float(params, weather)
    ideal = simulate_ideal_loads(params, weather, SetpointBand())
    zone_names = {sb.id: zone_name(st.index, sb.id)
                  for st in solution.layout.storeys for sb in st.spaces}
    series = {}
    for zone_id, temps in free.items():
        series[("Zone Mean Air Temperature", zone_names[zone_id])] = {
            "values": [float(t) for t in temps], "units": "C"}
    for zone_id, out in ideal.items():
        key = zone_names[zone_id]
        series[("Zone Air System Sensible Heating Energy", key)] = {
            "values": [float(q) * 3600.0 for q in out["q_heat"]],
            "units": "J"}
        series[("Zone Air System Sensible Cooling Energy", key)] = {
            "values": [float(q) * 3600.0 for q in out["q_cool"]],
            "units": "J"}
    series[("Site Outdoor Air Drybulb Temperature", "Environment")] = {
        "values": [float(t) for t in weather.dry_bulb], "units": "C"}
    return series


def parse_period(raw: str) -> ReportPeriod:
    raw = (raw or "all_year").strip()
    if raw.startswith("trimester"):
        tail = raw[len("trimester"):].strip(" _-")
        try:
            return ReportPeriod("trimester", int(tail))
        except ValueError:
            raise InvalidParams(f"bad trimester index in {raw!r}")
    try:
        return ReportPeriod(raw)
    except ValueError as exc:
        raise InvalidParams(str(exc))


class ProjectStore:
    """Projects on disk plus in-memory simulation results and job running."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._projects = {}
        self._results = {}  # solution_id -> series dict
        for path in sorted(self.root.glob("*.json")):
            self._projects[path.stem] = load_project(path)

    def _path(self, project_id: str) -> Path:
        return self.root / f"{project_id}.json"

    def _persist(self, project_id: str):
        save_project(self._projects[project_id], self._path(project_id))

    def create_project(self, data: dict) -> str:
        project_id = uuid.uuid4().hex[:12]
        project = Project(dict(data))
        with self._lock:
            self._projects[project_id] = project
            self._persist(project_id)
        return project_id

    def get(self, project_id: str) -> Project:
        try:
            return self._projects[project_id]
        except KeyError:
            raise UnknownProject(f"no project '{project_id}'")

    def project_ids(self) -> list:
        return sorted(self._projects)

    # -- jobs ------------------------------------------------------------

    def _jobs(self, project: Project) -> list:
        return project.data.setdefault("settings", {}).setdefault("jobs", [])

    def submit(self, kind: str, project_id: str, params: dict = None) -> dict:
        """Queue and synchronously execute a job; returns the job record.

        Synchronous execution keeps per-project submission order trivially
        and makes results immediately consistent for the caller.
        """
        if kind not in JOB_KINDS:
            raise InvalidParams(
                f"unknown job kind '{kind}'; expected one of "
                f"{', '.join(JOB_KINDS)}")
        params = dict(params or {})
        with self._lock:
            project = self.get(project_id)
            job = {
                "id": f"{project_id}-{uuid.uuid4().hex[:8]}",
                "kind": kind,
                "project_id": project_id,
                "params": params,
                "state": "queued",
                "progress": 0.0,
                "result": None,
                "error": None,
            }
            self._jobs(project).append(job)
            self._persist(project_id)
            self._run(project_id, job)
            return dict(job)

    def _run(self, project_id: str, job: dict):
        project = self.get(project_id)
        job["state"] = "running"
        try:
            runner = getattr(self, f"_job_{job['kind']}")
            job["result"] = runner(project_id, project, job["params"])
            job["state"] = "done"
        except PlanforgeError as exc:
            job["state"] = "failed"
            job["error"] = str(exc)
        job["progress"] = 1.0
        self._persist(project_id)

    def _job_generate(self, project_id, project, params):
        program = project.program
        report = validate_program(program)
        if not report.ok:
            raise InvalidParams(
                "; ".join(i.message for i in report.errors))
        es = EsParams(seed=int(params.get("seed", 0)))
        solutions = evolve(program, es,
                           n_solutions=int(params.get("n_solutions", 5)))
        project.set_solutions(solutions)
        return {"solutions": [s.solution_id for s in solutions]}

    def _job_simulate(self, project_id, project, params):
        solution = self._solution_in(project, params)
        engine = params.get("engine", "surrogate")
        if engine != "surrogate":
            raise InvalidParams(
                f"engine '{engine}' is not runnable here; use the CLI with "
                f"--eplus for an external simulation")
        series = simulate_surrogate(project, solution,
                                    weather_for(project, params))
        self._results[solution.solution_id] = series
        return {"solution_id": solution.solution_id,
                "variables": sorted({v for v, _ in series})}

    def _job_optimize(self, project_id, project, params):
        solution = self._solution_in(project, params)
        weather = weather_for(project, params)
        strategy = fpop.default_strategy(solution.layout)
        if "passes" in params:
            strategy = fpop.OptimizationStrategy(
                strategy.variables, passes=int(params["passes"]),
                objective=strategy.objective)
        result = fpop.optimize_sequential(
            solution.layout, strategy, project.program, weather)
        program = project.program
        optimized = evaluate(result["layout"], program)
        record = SolutionRecord.from_layout(
            optimized.layout, optimized.fitness,
            optimized.penalty_breakdown,
            {"optimized_from": solution.solution_id,
             "accepted_moves": len(result["trace"])})
        existing = [s for s in project.solutions
                    if s.solution_id != record.solution_id]
        project.set_solutions(existing + [record])
        return {"solution_id": record.solution_id,
                "accepted_moves": len(result["trace"])}

    def _job_export_idf(self, project_id, project, params):
        solution = self._solution_in(project, params)
        text = self.idf_text(solution.solution_id)
        out = params.get("out")
        if out:
            Path(out).write_text(text)
        return {"solution_id": solution.solution_id, "chars": len(text)}

    def _solution_in(self, project: Project,
                     params: dict) -> SolutionRecord:
        solutions = project.solutions
        if not solutions:
            raise InvalidParams("project has no solutions yet; run generate")
        wanted = params.get("solution_id")
        if wanted is None:
            return min(solutions,
                       key=lambda s: (s.fitness, s.solution_id))
        for s in solutions:
            if s.solution_id == wanted:
                return s
        raise UnknownSolution(f"no solution '{wanted}'")

    def job(self, job_id: str) -> dict:
        for project in self._projects.values():
            for job in (project.settings or {}).get("jobs", []):
                if job["id"] == job_id:
                    return dict(job)
        raise UnknownProject(f"no job '{job_id}'")

    # -- solutions -------------------------------------------------------

    def solutions(self, project_id: str) -> list:
        project = self.get(project_id)
        costs = cost_summary(project.data)
        out = []
        for s in sorted(project.solutions,
                        key=lambda s: (s.fitness, s.solution_id)):
            areas = {sb.id: sb.rect.area for sb in s.layout.all_spaces()}
            out.append({
                "solution_id": s.solution_id,
                "fitness": s.fitness,
                "penalty_breakdown": dict(s.penalty_breakdown),
                "areas": areas,
                "cost_grand_total": costs.grand_total,
            })
        return out

    def find_solution(self, solution_id: str):
        for project_id in sorted(self._projects):
            for s in self._projects[project_id].solutions:
                if s.solution_id == solution_id:
                    return project_id, s
        raise UnknownSolution(f"no solution '{solution_id}'")

    def layout_geometry(self, solution_id: str) -> dict:
        _, solution = self.find_solution(solution_id)
        return layout_to_dict(solution.layout)

    def variables(self, solution_id: str) -> list:
        self.find_solution(solution_id)
        series = self._results.get(solution_id, {})
        return [
            {"variable": v, "key": k, "units": series[(v, k)]["units"]}
            for v, k in sorted(series)]

    def report(self, solution_id: str, variable: str, key: str,
               period: ReportPeriod):
        project_id, _ = self.find_solution(solution_id)
        series = self._results.get(solution_id, {})
        if (variable, key) not in series:
            raise UnknownVariable(
                f"variable {variable!r} key {key!r} not available; run a "
                f"simulate job first",
                available=sorted(f"{v}/{k}" for v, k in series))
        entry = series[(variable, key)]
        weather = weather_for(self.get(project_id))
        return aggregate_report(entry["values"], weather, period,
                                variable=variable, key=key,
                                units=entry["units"])

    def idf_text(self, solution_id: str) -> str:
        project_id, solution = self.find_solution(solution_id)
        project = self.get(project_id)
        if solution.fitness != 0:
            raise InvalidParams(
                f"solution {solution_id} is not feasible "
                f"(fitness {solution.fitness})")
        return emit_idf(solution.layout,
                        systems_spec_from_project(project),
                        costs=(project.settings or {}).get("costs"),
                        site=project.program.site,
                        north_angle=project.program.site.north_angle)

    def costs(self, project_id: str) -> dict:
        project = self.get(project_id)
        summary = cost_summary(project.data)
        return {
            "items": [
                {"name": i.name, "type": i.type, "quantity": i.quantity,
                 "unit_cost": i.unit_cost, "total": i.total}
                for i in summary.items],
            "totals_by_type": summary.totals_by_type,
            "grand_total": summary.grand_total,
        }


def create_app(store: ProjectStore):
    """FastAPI application wrapping a ProjectStore."""
    from fastapi import FastAPI, Request
    from fastapi.responses import JSONResponse, PlainTextResponse

    app = FastAPI(title="planforge", version="1.0")

    @app.exception_handler(PlanforgeError)
    async def _on_error(request: Request, exc: PlanforgeError):
        if isinstance(exc, (UnknownProject, UnknownSolution)):
            status = 404
        elif isinstance(exc, UnknownVariable):
            return JSONResponse(status_code=404, content={
                "detail": str(exc), "available": exc.available})
        else:
            status = 422
        return JSONResponse(status_code=status,
                            content={"detail": str(exc)})

    @app.post("/projects")
    async def create_project(body: dict):
        from .project import validate_project_data
        validate_project_data(body)
        project_id = store.create_project(body)
        return {"project_id": project_id}

    @app.get("/projects/{project_id}")
    async def get_project(project_id: str):
        return store.get(project_id).data

    @app.post("/projects/{project_id}/jobs")
    async def submit_job(project_id: str, body: dict):
        kind = body.get("kind")
        if not kind:
            raise InvalidParams("body must carry 'kind'")
        return store.submit(kind, project_id, body.get("params"))

    @app.get("/jobs/{job_id}")
    async def get_job(job_id: str):
        return store.job(job_id)

    @app.get("/projects/{project_id}/solutions")
    async def get_solutions(project_id: str):
        return store.solutions(project_id)

    @app.get("/solutions/{solution_id}/layout")
    async def get_layout(solution_id: str):
        return store.layout_geometry(solution_id)

    @app.get("/solutions/{solution_id}/variables")
    async def get_variables(solution_id: str):
        return store.variables(solution_id)

    @app.get("/solutions/{solution_id}/report")
    async def get_report(solution_id: str, variable: str, key: str = "",
                         period: str = "all_year"):
        rep = store.report(solution_id, variable, key, parse_period(period))
        return {
            "variable": rep.variable,
            "key": rep.key,
            "period": rep.period.label,
            "hours": list(rep.hours),
            "values": list(rep.values),
            "units": rep.units,
            "aggregates": rep.aggregates,
        }

    @app.get("/solutions/{solution_id}/idf")
    async def get_idf(solution_id: str):
        return PlainTextResponse(store.idf_text(solution_id))

    @app.get("/solutions/{solution_id}/costs")
    async def get_costs(solution_id: str):
        project_id, _ = store.find_solution(solution_id)
        return store.costs(project_id)

    return app
