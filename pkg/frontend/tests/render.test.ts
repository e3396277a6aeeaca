import { describe, expect, it } from "vitest";

import {
  formatAggregates,
  formatValue,
  renderPeriodSelector,
  renderPlanSvg,
  renderReportChart,
  renderSolutionStrip,
} from "../src/render.js";
import { PERIOD_KINDS } from "../src/types.js";
import type {
  LayoutGeometry,
  ReportPayload,
  SolutionSummary,
} from "../src/types.js";

function twoSpaceLayout(): LayoutGeometry {
  return {
    storey_height: 2.7,
    storeys: [
      {
        index: 0,
        spaces: [
          { id: "hall", x: 0, y: 0, w: 4, h: 4 },
          { id: "bed", x: 4, y: 0, w: 4, h: 4 },
        ],
        openings: [
          {
            id: "win",
            kind: "window",
            owner: "hall",
            wall: "S",
            offset: 1,
            width: 2,
            height: 1.2,
            sill: 0.9,
            connects_to: null,
          },
        ],
        shades: [],
      },
      { index: 1, spaces: [], openings: [], shades: [] },
    ],
  };
}

function report(values: number[], period = "all_year"): ReportPayload {
  return {
    variable: "Zone Mean Air Temperature",
    key: "Z-0-hall",
    period,
    hours: values.map((_, i) => i),
    values,
    units: "C",
    aggregates: {
      sum: 123.456,
      mean: 7.8,
      min: -1.25,
      max: 99.875,
    },
  };
}

describe("renderPlanSvg", () => {
  it("draws one labelled polygon per space", () => {
    const svg = renderPlanSvg(twoSpaceLayout(), 0);
    expect(svg.match(/<polygon class="space"/g)).toHaveLength(2);
    expect(svg).toContain('data-space="hall"');
    expect(svg).toContain('data-space="bed"');
    expect(svg).toContain(">hall</text>");
    expect(svg).toContain(">bed</text>");
  });

  it("draws openings on their host wall", () => {
    const svg = renderPlanSvg(twoSpaceLayout(), 0);
    expect(svg.match(/<line class="opening opening-window"/g)).toHaveLength(1);
    expect(svg).toContain('data-opening="win"');
  });

  it("shows a notice for a storey with no spaces", () => {
    const svg = renderPlanSvg(twoSpaceLayout(), 1);
    expect(svg).toContain("no spaces on this storey");
    expect(svg).not.toContain("<polygon");
  });

  it("is deterministic for the same payload", () => {
    expect(renderPlanSvg(twoSpaceLayout(), 0)).toBe(
      renderPlanSvg(twoSpaceLayout(), 0),
    );
  });
});

describe("renderSolutionStrip", () => {
  const solutions: SolutionSummary[] = [
    {
      solution_id: "s-b",
      fitness: 0,
      penalty_breakdown: {},
      areas: {},
      cost_grand_total: 900,
    },
    {
      solution_id: "s-a",
      fitness: 0.5,
      penalty_breakdown: {},
      areas: {},
      cost_grand_total: 100,
    },
    {
      solution_id: "s-c",
      fitness: 2,
      penalty_breakdown: {},
      areas: {},
      cost_grand_total: 500,
    },
  ];

  it("preserves the order the API returned", () => {
    const html = renderSolutionStrip(solutions);
    const ids = [...html.matchAll(/data-solution="([^"]+)"/g)].map((m) => m[1]);
    expect(ids).toEqual(["s-b", "s-a", "s-c"]);
  });

  it("ranks by position, not by any re-sorting of its own", () => {
    const reversed = [...solutions].reverse();
    const html = renderSolutionStrip(reversed);
    const ids = [...html.matchAll(/data-solution="([^"]+)"/g)].map((m) => m[1]);
    expect(ids).toEqual(["s-c", "s-a", "s-b"]);
    const firstCard = html.slice(0, html.indexOf("#2"));
    expect(firstCard).toContain('data-solution="s-c"');
    expect(firstCard).toContain("#1");
  });

  it("marks the selected solution", () => {
    const html = renderSolutionStrip(solutions, "s-a");
    expect(html).toContain('class="solution-card selected" data-solution="s-a"');
  });

  it("shows fitness and cost verbatim", () => {
    const html = renderSolutionStrip(solutions);
    expect(html).toContain("fitness 0.5");
    expect(html).toContain("cost 900");
  });
});

describe("formatAggregates", () => {
  it("echoes every aggregate verbatim", () => {
    const html = formatAggregates(
      { sum: 123.456, mean: 7.8, min: -1.25, max: 99.875 },
      "C",
    );
    expect(html).toContain('<td class="agg-sum">123.456</td>');
    expect(html).toContain('<td class="agg-mean">7.8</td>');
    expect(html).toContain('<td class="agg-min">-1.25</td>');
    expect(html).toContain('<td class="agg-max">99.875</td>');
  });

  it("performs no rounding", () => {
    expect(formatValue(0.1 + 0.2)).toBe("0.30000000000000004");
  });
});

describe("renderReportChart", () => {
  it("plots one point per hour — 24 for a day slice", () => {
    const values = Array.from({ length: 24 }, (_, i) => 20 + Math.sin(i));
    const svg = renderReportChart(report(values, "hottest_day"));
    const points = svg.match(/points="([^"]+)"/)![1].trim().split(/\s+/);
    expect(points).toHaveLength(24);
  });

  it("is deterministic for the same payload", () => {
    const values = [1, 2, 3, 2, 1];
    expect(renderReportChart(report(values))).toBe(
      renderReportChart(report(values)),
    );
  });

  it("handles an empty series", () => {
    expect(renderReportChart(report([]))).toContain("empty period");
  });
});

describe("renderPeriodSelector", () => {
  it("exposes exactly the four period kinds", () => {
    const html = renderPeriodSelector();
    const values = [...html.matchAll(/value="([^"]+)"/g)].map((m) => m[1]);
    expect(values).toEqual([...PERIOD_KINDS]);
    expect(values).toHaveLength(4);
  });

  it("marks the selected period", () => {
    const html = renderPeriodSelector("coldest_day");
    expect(html).toContain('value="coldest_day" selected');
    expect(html.match(/ selected/g)).toHaveLength(1);
  });
});
