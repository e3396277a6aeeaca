/** DOM bootstrap: wires the store to the three panes.
 *
 * Layout: solution rank strip across the top, plan viewer on the left,
 * reports (period selector, chart, aggregates) on the right.
 */

import { ApiClient } from "./api.js";
import {
  formatAggregates,
  renderPeriodSelector,
  renderPlanSvg,
  renderReportChart,
  renderSolutionStrip,
} from "./render.js";
import { Store, type AppState } from "./state.js";

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function renderAll(state: AppState): void {
  byId("strip").innerHTML = renderSolutionStrip(
    state.solutions,
    state.selectedSolutionId,
  );

  if (state.layout) {
    byId("plan").innerHTML = renderPlanSvg(state.layout, state.storeyIndex);
    byId("storeys").innerHTML = state.layout.storeys
      .map(
        (s) =>
          `<button class="storey-tab${s.index === state.storeyIndex ? " selected" : ""}" ` +
          `data-storey="${s.index}">storey ${s.index}</button>`,
      )
      .join("");
  } else {
    byId("plan").innerHTML = `<p class="hint">select a solution to view its plan</p>`;
    byId("storeys").innerHTML = "";
  }

  byId("period").innerHTML = renderPeriodSelector(state.period);
  byId("variables").innerHTML = state.variables
    .map((v, i) => {
      const selected =
        state.selectedVariable &&
        v.variable === state.selectedVariable.variable &&
        v.key === state.selectedVariable.key;
      return (
        `<option value="${i}"${selected ? " selected" : ""}>` +
        `${v.variable} — ${v.key}</option>`
      );
    })
    .join("");

  if (state.report) {
    byId("chart").innerHTML = renderReportChart(state.report);
    byId("aggregates").innerHTML = formatAggregates(
      state.report.aggregates,
      state.report.units,
    );
  } else {
    byId("chart").innerHTML = "";
    byId("aggregates").innerHTML = "";
  }

  const job = state.activeJob;
  byId("job-status").textContent = job ? `${job.kind}: ${job.state}` : "";
  byId("error").textContent = state.error ?? "";
}

export function bootstrap(): void {
  const api = new ApiClient("");
  const store = new Store(api);
  store.subscribe(renderAll);

  byId("project-file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    const document = JSON.parse(await file.text());
    await store.openProject(document);
  });

  byId("btn-generate").addEventListener("click", () => {
    void store.runJob("generate");
  });
  byId("btn-simulate").addEventListener("click", () => {
    void store.runJob("simulate");
  });
  byId("btn-optimize").addEventListener("click", () => {
    void store.runJob("optimize");
  });

  byId("strip").addEventListener("click", (event) => {
    const card = (event.target as HTMLElement).closest("[data-solution]");
    if (card) {
      void store.selectSolution(card.getAttribute("data-solution")!);
    }
  });

  byId("storeys").addEventListener("click", (event) => {
    const tab = (event.target as HTMLElement).closest("[data-storey]");
    if (tab) store.selectStorey(Number(tab.getAttribute("data-storey")));
  });

  byId("period").addEventListener("change", (event) => {
    const select = event.target as HTMLSelectElement;
    void store.selectPeriod(select.value);
  });

  byId("variables").addEventListener("change", (event) => {
    const select = event.target as HTMLSelectElement;
    const variable = store.state.variables[Number(select.value)];
    if (variable) void store.selectVariable(variable);
  });
}

if (typeof document !== "undefined" && document.getElementById("strip")) {
  bootstrap();
}
