/** UI state and job orchestration.
 *
 * The store keeps exactly what the API returned; views read from it and
 * re-render. Jobs are submitted and then polled once a second until they
 * finish.
 */

import { ApiClient } from "./api.js";
import type {
  JobRecord,
  LayoutGeometry,
  ReportPayload,
  SolutionSummary,
  VariableInfo,
} from "./types.js";

export interface AppState {
  projectId: string | null;
  solutions: SolutionSummary[];
  selectedSolutionId: string | null;
  layout: LayoutGeometry | null;
  storeyIndex: number;
  variables: VariableInfo[];
  selectedVariable: VariableInfo | null;
  period: string;
  report: ReportPayload | null;
  activeJob: JobRecord | null;
  error: string | null;
}

export function initialState(): AppState {
  return {
    projectId: null,
    solutions: [],
    selectedSolutionId: null,
    layout: null,
    storeyIndex: 0,
    variables: [],
    selectedVariable: null,
    period: "all_year",
    report: null,
    activeJob: null,
    error: null,
  };
}

export type Listener = (state: AppState) => void;

export class Store {
  state: AppState = initialState();
  private listeners: Listener[] = [];

  constructor(
    readonly api: ApiClient,
    private readonly sleep: (ms: number) => Promise<void> = (ms) =>
      new Promise((resolve) => setTimeout(resolve, ms)),
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private update(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async openProject(document: unknown): Promise<void> {
    const projectId = await this.api.createProject(document);
    this.update({ ...initialState(), projectId });
    await this.refreshSolutions();
  }

  async refreshSolutions(): Promise<void> {
    if (!this.state.projectId) return;
    const solutions = await this.api.getSolutions(this.state.projectId);
    this.update({ solutions });
    if (solutions.length > 0 && !this.state.selectedSolutionId) {
      await this.selectSolution(solutions[0].solution_id);
    }
  }

  async selectSolution(solutionId: string): Promise<void> {
    const layout = await this.api.getLayout(solutionId);
    let variables: VariableInfo[] = [];
    try {
      variables = await this.api.getVariables(solutionId);
    } catch {
      /* not simulated yet */
    }
    this.update({
      selectedSolutionId: solutionId,
      layout,
      storeyIndex: layout.storeys.length > 0 ? layout.storeys[0].index : 0,
      variables,
      selectedVariable: variables.length > 0 ? variables[0] : null,
      report: null,
      error: null,
    });
    if (variables.length > 0) await this.refreshReport();
  }

  selectStorey(index: number): void {
    this.update({ storeyIndex: index });
  }

  async selectVariable(variable: VariableInfo): Promise<void> {
    this.update({ selectedVariable: variable });
    await this.refreshReport();
  }

  async selectPeriod(period: string): Promise<void> {
    this.update({ period });
    await this.refreshReport();
  }

  async refreshReport(): Promise<void> {
    const { selectedSolutionId, selectedVariable, period } = this.state;
    if (!selectedSolutionId || !selectedVariable) return;
    try {
      const report = await this.api.getReport(
        selectedSolutionId,
        selectedVariable.variable,
        selectedVariable.key,
        period,
      );
      this.update({ report, error: null });
    } catch (err) {
      this.update({ report: null, error: String(err) });
    }
  }

  /** Submit a job and poll its record every `intervalMs` until done. */
  async runJob(
    kind: string,
    params: Record<string, unknown> = {},
    intervalMs = 1000,
  ): Promise<JobRecord> {
    if (!this.state.projectId) throw new Error("no project open");
    let job = await this.api.submitJob(this.state.projectId, kind, params);
    this.update({ activeJob: job });
    while (job.state === "queued" || job.state === "running") {
      await this.sleep(intervalMs);
      job = await this.api.getJob(job.id);
      this.update({ activeJob: job });
    }
    if (job.state === "failed") {
      this.update({ error: job.error ?? "job failed" });
    } else {
      await this.refreshSolutions();
    }
    return job;
  }
}
