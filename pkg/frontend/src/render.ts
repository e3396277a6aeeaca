/** Pure string renderers for the UI.
 *
 * Every function here takes API payloads and returns an SVG or HTML string.
 * Numbers shown to the user are copied verbatim from the payloads — the
 * renderers compute drawing coordinates only, never new aggregates.
 */

import type {
  LayoutGeometry,
  ReportAggregates,
  ReportPayload,
  SolutionSummary,
  StoreyGeometry,
} from "./types.js";
import { PERIOD_KINDS } from "./types.js";

const SVG_SIZE = 480;
const MARGIN = 20;

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Format a value exactly as received — full precision, no rounding. */
export function formatValue(value: number): string {
  return String(value);
}

/** Plan drawing of one storey: one labelled polygon per space. */
export function renderPlanSvg(
  layout: LayoutGeometry,
  storeyIndex: number,
): string {
  const storey: StoreyGeometry | undefined = layout.storeys.find(
    (s) => s.index === storeyIndex,
  );
  if (!storey || storey.spaces.length === 0) {
    return (
      `<svg class="plan" viewBox="0 0 ${SVG_SIZE} ${SVG_SIZE}" ` +
      `xmlns="http://www.w3.org/2000/svg">` +
      `<text class="plan-empty" x="${SVG_SIZE / 2}" y="${SVG_SIZE / 2}" ` +
      `text-anchor="middle">no spaces on this storey</text></svg>`
    );
  }

  const minX = Math.min(...storey.spaces.map((s) => s.x));
  const minY = Math.min(...storey.spaces.map((s) => s.y));
  const maxX = Math.max(...storey.spaces.map((s) => s.x + s.w));
  const maxY = Math.max(...storey.spaces.map((s) => s.y + s.h));
  const scale = (SVG_SIZE - 2 * MARGIN) / Math.max(maxX - minX, maxY - minY);
  const px = (x: number) => MARGIN + (x - minX) * scale;
  // Flip y so north is up in screen coordinates.
  const py = (y: number) => SVG_SIZE - MARGIN - (y - minY) * scale;

  const parts: string[] = [
    `<svg class="plan" viewBox="0 0 ${SVG_SIZE} ${SVG_SIZE}" ` +
      `xmlns="http://www.w3.org/2000/svg">`,
  ];
  for (const space of storey.spaces) {
    const points = [
      `${px(space.x)},${py(space.y)}`,
      `${px(space.x + space.w)},${py(space.y)}`,
      `${px(space.x + space.w)},${py(space.y + space.h)}`,
      `${px(space.x)},${py(space.y + space.h)}`,
    ].join(" ");
    parts.push(
      `<polygon class="space" data-space="${escapeHtml(space.id)}" ` +
        `points="${points}"/>`,
    );
    parts.push(
      `<text class="space-label" x="${px(space.x + space.w / 2)}" ` +
        `y="${py(space.y + space.h / 2)}" text-anchor="middle">` +
        `${escapeHtml(space.id)}</text>`,
    );
  }
  for (const opening of storey.openings) {
    const host = storey.spaces.find((s) => s.id === opening.owner);
    if (!host) continue;
    let x1: number, y1: number, x2: number, y2: number;
    switch (opening.wall) {
      case "S":
        x1 = host.x + opening.offset;
        x2 = x1 + opening.width;
        y1 = y2 = host.y;
        break;
      case "N":
        x1 = host.x + opening.offset;
        x2 = x1 + opening.width;
        y1 = y2 = host.y + host.h;
        break;
      case "W":
        y1 = host.y + opening.offset;
        y2 = y1 + opening.width;
        x1 = x2 = host.x;
        break;
      case "E":
        y1 = host.y + opening.offset;
        y2 = y1 + opening.width;
        x1 = x2 = host.x + host.w;
        break;
    }
    parts.push(
      `<line class="opening opening-${opening.kind}" ` +
        `data-opening="${escapeHtml(opening.id)}" ` +
        `x1="${px(x1)}" y1="${py(y1)}" x2="${px(x2)}" y2="${py(y2)}"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

/** Ranked strip of solutions, preserving the order the API returned. */
export function renderSolutionStrip(
  solutions: SolutionSummary[],
  selectedId: string | null = null,
): string {
  if (solutions.length === 0) {
    return `<div class="strip strip-empty">no solutions yet — run generate</div>`;
  }
  const cards = solutions.map((s, rank) => {
    const selected = s.solution_id === selectedId ? " selected" : "";
    return (
      `<button class="solution-card${selected}" ` +
      `data-solution="${escapeHtml(s.solution_id)}">` +
      `<span class="rank">#${rank + 1}</span>` +
      `<span class="fitness">fitness ${formatValue(s.fitness)}</span>` +
      `<span class="cost">cost ${formatValue(s.cost_grand_total)}</span>` +
      `</button>`
    );
  });
  return `<div class="strip">${cards.join("")}</div>`;
}

/** Aggregates table; values are echoed verbatim from the payload. */
export function formatAggregates(
  aggregates: ReportAggregates,
  units: string,
): string {
  const row = (label: string, value: number) =>
    `<tr><th>${label}</th>` +
    `<td class="agg-${label}">${formatValue(value)}</td>` +
    `<td>${escapeHtml(units)}</td></tr>`;
  return (
    `<table class="aggregates">` +
    row("sum", aggregates.sum) +
    row("mean", aggregates.mean) +
    row("min", aggregates.min) +
    row("max", aggregates.max) +
    `</table>`
  );
}

/** Polyline chart of a report series: one point per reported hour. */
export function renderReportChart(report: ReportPayload): string {
  const width = 640;
  const height = 240;
  const n = report.values.length;
  if (n === 0) {
    return (
      `<svg class="chart" viewBox="0 0 ${width} ${height}" ` +
      `xmlns="http://www.w3.org/2000/svg">` +
      `<text x="${width / 2}" y="${height / 2}" text-anchor="middle">` +
      `empty period</text></svg>`
    );
  }
  const lo = Math.min(...report.values);
  const hi = Math.max(...report.values);
  const span = hi - lo || 1;
  const points = report.values
    .map((v, i) => {
      const x = n === 1 ? width / 2 : (i / (n - 1)) * (width - 2 * MARGIN) + MARGIN;
      const y = height - MARGIN - ((v - lo) / span) * (height - 2 * MARGIN);
      return `${x},${y}`;
    })
    .join(" ");
  return (
    `<svg class="chart" viewBox="0 0 ${width} ${height}" ` +
    `xmlns="http://www.w3.org/2000/svg">` +
    `<title>${escapeHtml(report.variable)} — ${escapeHtml(report.key)}</title>` +
    `<polyline class="series" fill="none" points="${points}"/>` +
    `</svg>`
  );
}

/** The period selector: exactly one option per period kind. */
export function renderPeriodSelector(selected: string = "all_year"): string {
  const options = PERIOD_KINDS.map((kind) => {
    const sel = kind === selected ? " selected" : "";
    return `<option value="${kind}"${sel}>${kind.replace("_", " ")}</option>`;
  });
  return `<select class="period-selector">${options.join("")}</select>`;
}
