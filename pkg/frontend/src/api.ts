/** Thin typed client over the planforge HTTP API.
 *
 * Every piece of data the UI shows comes through these calls; the client
 * never derives numbers of its own beyond drawing coordinates.
 */

import type {
  CostPayload,
  JobRecord,
  LayoutGeometry,
  ReportPayload,
  SolutionSummary,
  VariableInfo,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
  text(): Promise<string>;
}>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = fetch as unknown as FetchLike,
  ) {}

  private async request<T>(path: string, init?: Parameters<FetchLike>[1]): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body && body.detail) detail = body.detail;
      } catch {
        /* non-JSON error body; keep the status line */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  async createProject(document: unknown): Promise<string> {
    const body = await this.request<{ project_id: string }>("/projects", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(document),
    });
    return body.project_id;
  }

  getProject(projectId: string): Promise<Record<string, unknown>> {
    return this.request(`/projects/${projectId}`);
  }

  submitJob(
    projectId: string,
    kind: string,
    params: Record<string, unknown> = {},
  ): Promise<JobRecord> {
    return this.request(`/projects/${projectId}/jobs`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ kind, params }),
    });
  }

  getJob(jobId: string): Promise<JobRecord> {
    return this.request(`/jobs/${jobId}`);
  }

  /** Solution summaries in the server's order (fitness-ascending). */
  getSolutions(projectId: string): Promise<SolutionSummary[]> {
    return this.request(`/projects/${projectId}/solutions`);
  }

  getLayout(solutionId: string): Promise<LayoutGeometry> {
    return this.request(`/solutions/${solutionId}/layout`);
  }

  getVariables(solutionId: string): Promise<VariableInfo[]> {
    return this.request(`/solutions/${solutionId}/variables`);
  }

  getReport(
    solutionId: string,
    variable: string,
    key: string,
    period: string,
  ): Promise<ReportPayload> {
    const query = new URLSearchParams({ variable, key, period });
    return this.request(`/solutions/${solutionId}/report?${query}`);
  }

  getCosts(solutionId: string): Promise<CostPayload> {
    return this.request(`/solutions/${solutionId}/costs`);
  }

  async getIdf(solutionId: string): Promise<string> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/solutions/${solutionId}/idf`,
    );
    if (!response.ok) {
      throw new ApiError(response.status, `HTTP ${response.status}`);
    }
    return response.text();
  }
}

/** Poll a job until it leaves the queued/running states. */
export async function waitForJob(
  api: ApiClient,
  jobId: string,
  intervalMs = 1000,
  sleep: (ms: number) => Promise<void> = (ms) =>
    new Promise((resolve) => setTimeout(resolve, ms)),
): Promise<JobRecord> {
  for (;;) {
    const job = await api.getJob(jobId);
    if (job.state === "done" || job.state === "failed") return job;
    await sleep(intervalMs);
  }
}
