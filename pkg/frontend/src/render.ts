/**
 * DOM rendering. Every number shown is a view-model field (which in turn is
 * a service response field); rendering never does planning arithmetic.
 * Elements carry data-field attributes so tests can audit displayed values.
 */

import type { ProjectDoc } from "./types.js";
import {
  DagLayout,
  GanttRow,
  GaugePoint,
  SessionView,
  ganttRows,
  layoutDag,
  shortfallTable,
} from "./view.js";

const SVG_NS = "http://www.w3.org/2000/svg";

/** Compact display form: up to three decimals, no trailing zeros. */
export function fmtNumber(value: number | null): string {
  if (value === null) return "—";
  const fixed = value.toFixed(3);
  return fixed.replace(/\.?0+$/, "") || "0";
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function renderStatus(root: HTMLElement, view: SessionView): void {
  root.replaceChildren(
    el("span", { class: `phase phase-${view.phase}`, "data-field": "phase" }, view.phase),
    el("span", { class: "stat" }, "T = "),
    el("span", { "data-field": "clock" }, fmtNumber(view.clock)),
    el("span", { class: "stat" }, "C = "),
    el("span", { "data-field": "committed-cost" }, fmtNumber(view.committedCost)),
    el("span", { class: "stat" }, "ideal T* = "),
    el("span", { "data-field": "ideal-t" }, fmtNumber(view.idealT)),
    el("span", { class: "stat" }, "ideal C* = "),
    el("span", { "data-field": "ideal-c" }, fmtNumber(view.idealC)),
  );
}

export function renderDag(root: HTMLElement, project: ProjectDoc, view: SessionView): void {
  const layout: DagLayout = layoutDag(project, view.taskStates);
  const colWidth = 120;
  const rowHeight = 56;
  const width = Math.max(1, layout.layerCount) * colWidth + 40;
  const height = Math.max(1, layout.rowCount) * rowHeight + 20;
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    "data-field": "dag",
  });

  const centers = new Map<string, { x: number; y: number }>();
  for (const node of layout.nodes) {
    centers.set(node.id, {
      x: 40 + node.layer * colWidth + 36,
      y: 16 + node.row * rowHeight + 16,
    });
  }
  for (const edge of layout.edges) {
    const from = centers.get(edge.from);
    const to = centers.get(edge.to);
    if (!from || !to) continue;
    svg.appendChild(
      svgEl("line", {
        x1: String(from.x + 36),
        y1: String(from.y),
        x2: String(to.x - 36),
        y2: String(to.y),
        class: "dag-edge",
      }),
    );
  }
  for (const node of layout.nodes) {
    const center = centers.get(node.id);
    if (!center) continue;
    const group = svgEl("g", {
      class: `dag-node state-${node.state}`,
      "data-task": node.id,
      "data-state": node.state,
    });
    group.appendChild(
      svgEl("rect", {
        x: String(center.x - 36),
        y: String(center.y - 14),
        width: "72",
        height: "28",
        rx: "6",
      }),
    );
    const label = svgEl("text", {
      x: String(center.x),
      y: String(center.y + 4),
      "text-anchor": "middle",
    });
    label.textContent = node.id;
    group.appendChild(label);
    svg.appendChild(group);
  }
  root.replaceChildren(svg);
}

export function renderGantt(root: HTMLElement, view: SessionView): void {
  const rows: GanttRow[] = ganttRows(view);
  if (rows.length === 0) {
    root.replaceChildren(el("p", { class: "empty" }, "Nothing committed yet."));
    return;
  }
  const horizon = Math.max(view.clock, ...rows.map((r) => r.end), 1e-9);
  const labelWidth = 90;
  const barArea = 420;
  const rowHeight = 24;
  const svg = svgEl("svg", {
    viewBox: `0 0 ${labelWidth + barArea + 20} ${rows.length * rowHeight + 10}`,
    width: String(labelWidth + barArea + 20),
    height: String(rows.length * rowHeight + 10),
    "data-field": "gantt",
  });
  rows.forEach((row, index) => {
    const y = 5 + index * rowHeight;
    const label = svgEl("text", { x: "0", y: String(y + 15), class: "gantt-label" });
    label.textContent = row.task;
    svg.appendChild(label);
    const x = labelWidth + (row.start / horizon) * barArea;
    const width = Math.max(2, ((row.end - row.start) / horizon) * barArea);
    const bar = svgEl("rect", {
      x: String(x),
      y: String(y + 2),
      width: String(width),
      height: String(rowHeight - 8),
      class: row.done ? "gantt-bar done" : "gantt-bar running",
      "data-task": row.task,
    });
    const title = svgEl("title");
    title.textContent = `${row.task}: ${fmtNumber(row.start)} → ${fmtNumber(row.end)} (${row.crew || "no crew"}) cost ${fmtNumber(row.cost)}`;
    bar.appendChild(title);
    svg.appendChild(bar);
  });
  const clockX = labelWidth + (view.clock / horizon) * barArea;
  svg.appendChild(
    svgEl("line", {
      x1: String(clockX),
      y1: "0",
      x2: String(clockX),
      y2: String(rows.length * rowHeight + 10),
      class: "gantt-now",
    }),
  );
  root.replaceChildren(svg);
}

export function renderGauge(root: HTMLElement, history: GaugePoint[], view: SessionView): void {
  const width = 260;
  const height = 180;
  const pad = 30;
  const idealC = view.idealC ?? 0;
  const maxT = Math.max(view.idealT, ...history.map((p) => p.t), 1e-9);
  const maxC = Math.max(idealC, ...history.map((p) => p.c), 1e-9);
  const sx = (t: number) => pad + (t / maxT) * (width - 2 * pad);
  const sy = (c: number) => height - pad - (c / maxC) * (height - 2 * pad);

  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    "data-field": "gauge",
  });
  if (history.length > 1) {
    const points = history.map((p) => `${sx(p.t)},${sy(p.c)}`).join(" ");
    svg.appendChild(svgEl("polyline", { points, class: "gauge-trajectory" }));
  }
  const last = history[history.length - 1];
  if (last) {
    svg.appendChild(
      svgEl("circle", {
        cx: String(sx(last.t)),
        cy: String(sy(last.c)),
        r: "4",
        class: "gauge-current",
      }),
    );
  }
  if (view.idealC !== null) {
    svg.appendChild(
      svgEl("circle", {
        cx: String(sx(view.idealT)),
        cy: String(sy(view.idealC)),
        r: "5",
        class: "gauge-ideal",
        "data-field": "gauge-ideal",
      }),
    );
  }
  root.replaceChildren(svg);
}

export function renderShortfalls(root: HTMLElement, view: SessionView): void {
  if (!view.prompt || view.prompt.case !== "infeasible") {
    root.replaceChildren();
    return;
  }
  const table = el("table", { class: "shortfalls", "data-field": "shortfalls" });
  const head = el("tr");
  for (const column of ["tasks", "work types", "required", "available", "missing"]) {
    head.appendChild(el("th", {}, column));
  }
  table.appendChild(head);
  for (const row of shortfallTable(view.prompt)) {
    const tr = el("tr", { "data-field": "shortfall-row" });
    tr.appendChild(el("td", { "data-field": "sf-tasks" }, row.tasks));
    tr.appendChild(el("td", { "data-field": "sf-work-types" }, row.workTypes));
    tr.appendChild(el("td", { "data-field": "sf-required" }, String(row.required)));
    tr.appendChild(el("td", { "data-field": "sf-available" }, String(row.available)));
    tr.appendChild(el("td", { "data-field": "sf-missing" }, String(row.missing)));
    table.appendChild(tr);
  }
  root.replaceChildren(table);
}

export function renderWorkers(root: HTMLElement, view: SessionView): void {
  root.replaceChildren(
    el("span", { class: "stat" }, "free: "),
    el("span", { "data-field": "free-workers" }, view.freeWorkers.join(", ") || "none"),
    el("span", { class: "stat" }, "occupied: "),
    el(
      "span",
      { "data-field": "occupied-workers" },
      view.occupiedWorkers.join(", ") || "none",
    ),
  );
}

export function renderTrace(root: HTMLElement, view: SessionView): void {
  if (view.trace.length === 0) {
    root.replaceChildren(el("p", { class: "empty" }, "No concessions yet."));
    return;
  }
  const list = el("ol", { class: "trace", "data-field": "trace" });
  for (const entry of view.trace) {
    const overrun =
      entry.prompt.case === "cost-overrun"
        ? ` (overrun ${fmtNumber(entry.prompt.overrun ?? null)})`
        : "";
    const decision =
      entry.decision.kind === "defer-tasks"
        ? `defer ${entry.decision.tasks.join(", ")}`
        : entry.decision.kind;
    list.appendChild(el("li", {}, `${entry.prompt.case}${overrun} → ${decision}`));
  }
  root.replaceChildren(list);
}
