/** Wire types mirroring the planforge HTTP API responses. */

export interface SpaceGeometry {
  id: string;
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface OpeningGeometry {
  id: string;
  kind: "window" | "door";
  owner: string;
  wall: "N" | "E" | "S" | "W";
  offset: number;
  width: number;
  height: number;
  sill: number;
  connects_to: string | null;
}

export interface StoreyGeometry {
  index: number;
  spaces: SpaceGeometry[];
  openings: OpeningGeometry[];
  shades: { owner: string; depth: number }[];
}

export interface LayoutGeometry {
  storey_height: number;
  storeys: StoreyGeometry[];
}

export interface SolutionSummary {
  solution_id: string;
  fitness: number;
  penalty_breakdown: Record<string, number>;
  areas: Record<string, number>;
  cost_grand_total: number;
}

export interface VariableInfo {
  variable: string;
  key: string;
  units: string;
}

export interface ReportAggregates {
  sum: number;
  mean: number;
  min: number;
  max: number;
}

export interface ReportPayload {
  variable: string;
  key: string;
  period: string;
  hours: number[];
  values: number[];
  units: string;
  aggregates: ReportAggregates;
}

export interface JobRecord {
  id: string;
  kind: string;
  project_id: string;
  params: Record<string, unknown>;
  state: "queued" | "running" | "done" | "failed";
  progress: number;
  result: Record<string, unknown> | null;
  error: string | null;
}

export interface CostItem {
  name: string;
  type: string;
  quantity: number;
  unit_cost: number;
  total: number;
}

export interface CostPayload {
  items: CostItem[];
  totals_by_type: Record<string, number>;
  grand_total: number;
}

/** The report period kinds the service understands. */
export const PERIOD_KINDS = [
  "all_year",
  "trimester",
  "coldest_day",
  "hottest_day",
] as const;

export type PeriodKind = (typeof PERIOD_KINDS)[number];
