import { beforeEach, describe, expect, it } from "vitest";

import {
  fmtNumber,
  renderGantt,
  renderGauge,
  renderShortfalls,
  renderStatus,
  renderTrace,
  renderWorkers,
} from "../src/render.js";
import { appendTrajectory, buildSessionView } from "../src/view.js";
import {
  sessionAfterAccept,
  sessionCase1,
  sessionCase2,
  sessionCase2Running,
} from "./fixtures.js";

function host(): HTMLElement {
  const node = document.createElement("div");
  document.body.appendChild(node);
  return node;
}

beforeEach(() => {
  document.body.replaceChildren();
});

function field(root: HTMLElement, name: string): string {
  const node = root.querySelector(`[data-field="${name}"]`);
  expect(node, `missing [data-field=${name}]`).not.toBeNull();
  return node!.textContent ?? "";
}

describe("renderStatus", () => {
  it("displays T and C exactly as the service reported them", () => {
    const doc = sessionCase2Running();
    const root = host();
    renderStatus(root, buildSessionView(doc));
    expect(field(root, "clock")).toBe(fmtNumber(doc.clock));
    expect(field(root, "committed-cost")).toBe(fmtNumber(doc.committed_cost));
    expect(field(root, "ideal-t")).toBe(fmtNumber(doc.ideal_point.t_star));
    expect(field(root, "ideal-c")).toBe(fmtNumber(doc.ideal_point.c_star));
    expect(field(root, "phase")).toBe(doc.phase);
  });
});

describe("renderShortfalls", () => {
  it("shows the Case 1 shortfall table cell-for-cell", () => {
    const doc = sessionCase1();
    const root = host();
    renderShortfalls(root, buildSessionView(doc));
    const rows = root.querySelectorAll('[data-field="shortfall-row"]');
    expect(rows).toHaveLength(doc.prompt!.shortfalls!.length);
    rows.forEach((row, index) => {
      const source = doc.prompt!.shortfalls![index]!;
      expect(row.querySelector('[data-field="sf-required"]')!.textContent).toBe(
        String(source.required),
      );
      expect(row.querySelector('[data-field="sf-available"]')!.textContent).toBe(
        String(source.available),
      );
      expect(row.querySelector('[data-field="sf-missing"]')!.textContent).toBe(
        String(source.missing),
      );
      expect(row.querySelector('[data-field="sf-tasks"]')!.textContent).toBe(
        source.tasks.join(", "),
      );
    });
  });

  it("renders nothing for cost-overrun prompts", () => {
    const root = host();
    renderShortfalls(root, buildSessionView(sessionCase2()));
    expect(root.querySelector("table")).toBeNull();
  });
});

describe("renderGantt", () => {
  it("draws one bar per committed task", () => {
    const doc = sessionCase2Running();
    const root = host();
    renderGantt(root, buildSessionView(doc));
    const bars = root.querySelectorAll(".gantt-bar");
    expect(bars).toHaveLength(doc.schedule.length);
    const states = [...bars].map((bar) => bar.getAttribute("class"));
    expect(states).toContain("gantt-bar running");
    expect(states).toContain("gantt-bar done");
  });

  it("covers every task once the session completed", () => {
    const doc = sessionAfterAccept();
    const root = host();
    renderGantt(root, buildSessionView(doc));
    expect(root.querySelectorAll(".gantt-bar.done")).toHaveLength(doc.schedule.length);
  });
});

describe("renderGauge", () => {
  it("marks the ideal point and the current trajectory", () => {
    const view = buildSessionView(sessionCase2Running());
    const root = host();
    renderGauge(root, appendTrajectory([], view), view);
    expect(root.querySelector(".gauge-ideal")).not.toBeNull();
    expect(root.querySelector(".gauge-current")).not.toBeNull();
  });
});

describe("renderWorkers", () => {
  it("lists free and occupied workers from the response", () => {
    const doc = sessionCase2Running();
    const root = host();
    renderWorkers(root, buildSessionView(doc));
    expect(field(root, "free-workers")).toBe(doc.free_workers.join(", "));
  });
});

describe("renderTrace", () => {
  it("lists each concession with its overrun", () => {
    const doc = sessionAfterAccept();
    const root = host();
    renderTrace(root, buildSessionView(doc));
    const items = root.querySelectorAll("li");
    expect(items).toHaveLength(doc.concession_trace.length);
    const first = doc.concession_trace[0]!;
    expect(items[0]!.textContent).toContain(
      fmtNumber(first.prompt.overrun ?? null),
    );
  });
});
