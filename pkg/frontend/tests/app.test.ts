import { describe, expect, it } from "vitest";

import { ApiClient, waitForJob, ApiError } from "../src/api.js";
import type { FetchLike } from "../src/api.js";
import { Store } from "../src/state.js";
import { formatAggregates, renderPlanSvg, renderSolutionStrip } from "../src/render.js";
import type {
  JobRecord,
  LayoutGeometry,
  ReportPayload,
  SolutionSummary,
} from "../src/types.js";

/** fetch double routing requests to canned JSON payloads. */
function mockFetch(
  routes: Record<string, unknown | ((init?: { body?: string }) => unknown)>,
  log: string[] = [],
): FetchLike {
  return async (input, init) => {
    const path = input.split("?")[0];
    const method = init?.method ?? "GET";
    log.push(`${method} ${input}`);
    const key = `${method} ${path}`;
    if (!(key in routes)) {
      return {
        ok: false,
        status: 404,
        json: async () => ({ detail: `no route ${key}` }),
        text: async () => `no route ${key}`,
      };
    }
    const handler = routes[key];
    const payload = typeof handler === "function" ? handler(init) : handler;
    return {
      ok: true,
      status: 200,
      json: async () => payload,
      text: async () => String(payload),
    };
  };
}

function summary(id: string, fitness: number): SolutionSummary {
  return {
    solution_id: id,
    fitness,
    penalty_breakdown: {},
    areas: {},
    cost_grand_total: 0,
  };
}

function fiveSpaceLayout(): LayoutGeometry {
  return {
    storey_height: 2.7,
    storeys: [
      {
        index: 0,
        spaces: [
          { id: "hall", x: 0, y: 0, w: 2, h: 5 },
          { id: "living", x: 2, y: 0, w: 4, h: 5 },
          { id: "kitchen", x: 6, y: 0, w: 3, h: 3 },
          { id: "bed", x: 6, y: 3, w: 3, h: 2 },
          { id: "bath", x: 0, y: 5, w: 2, h: 2 },
        ],
        openings: [],
        shades: [],
      },
    ],
  };
}

describe("API client", () => {
  it("creates a project and reads back solutions in API order", async () => {
    const api = new ApiClient(
      "",
      mockFetch({
        "POST /projects": { project_id: "p1" },
        "GET /projects/p1/solutions": [
          summary("s-2", 0),
          summary("s-1", 0.25),
          summary("s-3", 1.5),
        ],
      }),
    );
    const projectId = await api.createProject({ format_version: 1 });
    const solutions = await api.getSolutions(projectId);
    expect(solutions.map((s) => s.solution_id)).toEqual(["s-2", "s-1", "s-3"]);
  });

  it("surfaces the server's error detail", async () => {
    const fetchImpl: FetchLike = async () => ({
      ok: false,
      status: 404,
      json: async () => ({ detail: "unknown solution nope" }),
      text: async () => "",
    });
    const api = new ApiClient("", fetchImpl);
    await expect(api.getLayout("nope")).rejects.toThrow("unknown solution nope");
    await expect(api.getLayout("nope")).rejects.toBeInstanceOf(ApiError);
  });
});

describe("aggregate pass-through", () => {
  // Twenty fixture payloads with awkward values; the rendered table must
  // contain each number exactly as the API sent it.
  const fixtures: ReportPayload[] = Array.from({ length: 20 }, (_, i) => {
    const base = (i + 1) * 1.1;
    return {
      variable: "Zone Mean Air Temperature",
      key: `Z-0-space${i}`,
      period: "all_year",
      hours: [0, 1, 2],
      values: [base, base + 0.123456789, base - 3.3],
      units: "C",
      aggregates: {
        sum: base * 3 + 0.000000123 * i,
        mean: base + 0.0411522630333 * i,
        min: base - 3.3,
        max: base + 0.123456789,
      },
    };
  });

  it.each(fixtures.map((f, i) => [i, f] as const))(
    "fixture %i: displayed aggregates equal the API values",
    async (_i, fixture) => {
      const api = new ApiClient(
        "",
        mockFetch({ "GET /solutions/s-1/report": fixture }),
      );
      const report = await api.getReport(
        "s-1",
        fixture.variable,
        fixture.key,
        fixture.period,
      );
      const html = formatAggregates(report.aggregates, report.units);
      for (const name of ["sum", "mean", "min", "max"] as const) {
        expect(html).toContain(
          `<td class="agg-${name}">${String(fixture.aggregates[name])}</td>`,
        );
      }
    },
  );
});

describe("store", () => {
  function routesForProject(log: string[] = []) {
    return mockFetch(
      {
        "POST /projects": { project_id: "p1" },
        "GET /projects/p1/solutions": [summary("s-1", 0), summary("s-2", 0.5)],
        "GET /solutions/s-1/layout": fiveSpaceLayout(),
        "GET /solutions/s-1/variables": [],
        "GET /solutions/s-2/layout": fiveSpaceLayout(),
        "GET /solutions/s-2/variables": [],
      },
      log,
    );
  }

  it("renders exactly as many spaces as the layout payload holds", async () => {
    const store = new Store(new ApiClient("", routesForProject()));
    await store.openProject({ format_version: 1 });
    const svg = renderPlanSvg(store.state.layout!, store.state.storeyIndex);
    expect(svg.match(/<polygon class="space"/g)).toHaveLength(5);
  });

  it("keeps the API's solution order in the strip", async () => {
    const store = new Store(new ApiClient("", routesForProject()));
    await store.openProject({ format_version: 1 });
    const html = renderSolutionStrip(
      store.state.solutions,
      store.state.selectedSolutionId,
    );
    const ids = [...html.matchAll(/data-solution="([^"]+)"/g)].map((m) => m[1]);
    expect(ids).toEqual(["s-1", "s-2"]);
  });

  it("selects the first solution the API listed", async () => {
    const store = new Store(new ApiClient("", routesForProject()));
    await store.openProject({ format_version: 1 });
    expect(store.state.selectedSolutionId).toBe("s-1");
  });
});

describe("job polling", () => {
  it("polls once per second until the job finishes", async () => {
    const states: JobRecord["state"][] = ["running", "running", "done"];
    let polls = 0;
    const job = (state: JobRecord["state"]): JobRecord => ({
      id: "j1",
      kind: "generate",
      project_id: "p1",
      params: {},
      state,
      progress: state === "done" ? 1 : 0.5,
      result: null,
      error: null,
    });
    const sleeps: number[] = [];
    const fetchImpl = mockFetch({
      "POST /projects": { project_id: "p1" },
      "GET /projects/p1/solutions": [],
      "POST /projects/p1/jobs": job("queued"),
      "GET /jobs/j1": () => job(states[Math.min(polls++, states.length - 1)]),
    });
    const store = new Store(new ApiClient("", fetchImpl), async (ms) => {
      sleeps.push(ms);
    });
    await store.openProject({ format_version: 1 });
    const finished = await store.runJob("generate");
    expect(finished.state).toBe("done");
    expect(sleeps).toEqual([1000, 1000, 1000]);
  });

  it("records a failed job's error instead of throwing", async () => {
    const failed: JobRecord = {
      id: "j1",
      kind: "simulate",
      project_id: "p1",
      params: {},
      state: "failed",
      progress: 0,
      result: null,
      error: "weather file missing",
    };
    const store = new Store(
      new ApiClient(
        "",
        mockFetch({
          "POST /projects": { project_id: "p1" },
          "GET /projects/p1/solutions": [],
          "POST /projects/p1/jobs": failed,
        }),
      ),
      async () => {},
    );
    await store.openProject({ format_version: 1 });
    const job = await store.runJob("simulate");
    expect(job.state).toBe("failed");
    expect(store.state.error).toBe("weather file missing");
  });

  it("waitForJob resolves once the state leaves queued/running", async () => {
    let polls = 0;
    const fetchImpl = mockFetch({
      "GET /jobs/j1": () => ({
        id: "j1",
        kind: "generate",
        project_id: "p1",
        params: {},
        state: polls++ < 2 ? "running" : "done",
        progress: 1,
        result: null,
        error: null,
      }),
    });
    const job = await waitForJob(
      new ApiClient("", fetchImpl),
      "j1",
      1000,
      async () => {},
    );
    expect(job.state).toBe("done");
    expect(polls).toBe(3);
  });
});
