import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { fmtNumber } from "../src/render.js";
import { DecisionModal } from "../src/modal.js";
import type { DecisionDoc, DryRunDoc } from "../src/types.js";
import { buildSessionView } from "../src/view.js";
import {
  dryRunAccept,
  dryRunDefer,
  dryRunRunningDefer,
  projectRateSkew,
  sessionCase1,
  sessionCase2,
  sessionCase2Running,
} from "./fixtures.js";

class StubApi extends ApiClient {
  posted: { sessionId: string; seq: number; decision: DecisionDoc }[] = [];
  probes: DecisionDoc[] = [];

  constructor(private readonly byKind: Record<string, DryRunDoc>) {
    super("");
  }

  override dryRun(_sessionId: string, decision: DecisionDoc): Promise<DryRunDoc> {
    this.probes.push(decision);
    const probe = this.byKind[decision.kind];
    if (!probe) throw new Error(`no stub dry-run for ${decision.kind}`);
    return Promise.resolve(probe);
  }

  override postDecision(sessionId: string, seq: number, decision: DecisionDoc) {
    this.posted.push({ sessionId, seq, decision });
    return Promise.resolve(sessionCase2());
  }
}

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

let root: HTMLElement;

beforeEach(() => {
  document.body.replaceChildren();
  root = document.createElement("div");
  document.body.appendChild(root);
});

describe("DecisionModal cards", () => {
  it("shows dry-run numbers verbatim on each card", async () => {
    const api = new StubApi({
      "accept-cost": dryRunAccept(),
      "defer-tasks": dryRunDefer(),
    });
    const modal = new DecisionModal(api, root, async () => {});
    const view = buildSessionView(sessionCase2());
    // match the recorded defer probe: only A2 selected
    await modal.open(view, projectRateSkew());
    const boxes = root.querySelectorAll('[data-field="defer-choice"]');
    (boxes[0] as HTMLInputElement).click(); // unselect A1, leaving {A2}
    await flush();

    const cards = [...root.querySelectorAll('[data-field="what-if-card"]')];
    const accept = cards.find((c) => (c as HTMLElement).dataset.kind === "accept-cost")!;
    expect(accept.querySelector('[data-field="delta-t"]')!.textContent).toBe(
      fmtNumber(dryRunAccept().projected_t_delta),
    );
    expect(accept.querySelector('[data-field="delta-c"]')!.textContent).toBe(
      fmtNumber(dryRunAccept().projected_c_delta),
    );
    const defer = cards.find((c) => (c as HTMLElement).dataset.kind === "defer-tasks")!;
    expect(defer.querySelector('[data-field="delta-t"]')!.textContent).toBe(
      fmtNumber(dryRunDefer().projected_t_delta),
    );
    expect(defer.querySelector('[data-field="delta-c"]')!.textContent).toBe(
      fmtNumber(dryRunDefer().projected_c_delta),
    );
  });

  it("shows the prompt overrun in the header line", async () => {
    const api = new StubApi({
      "accept-cost": dryRunAccept(),
      "defer-tasks": dryRunDefer(),
    });
    const modal = new DecisionModal(api, root, async () => {});
    const doc = sessionCase2();
    await modal.open(buildSessionView(doc), projectRateSkew());
    expect(root.querySelector('[data-field="overrun"]')!.textContent).toBe(
      fmtNumber(doc.prompt!.overrun!),
    );
  });
});

describe("DecisionModal progress rule", () => {
  it("disables defer-all when nothing is running", async () => {
    const api = new StubApi({ "defer-tasks": dryRunDefer() });
    const modal = new DecisionModal(api, root, async () => {});
    const view = buildSessionView(sessionCase1());
    await modal.open(view, projectRateSkew());
    // all ready tasks selected by default and nothing is running
    expect(modal.candidates()).toHaveLength(0);
    expect(root.querySelector('[data-field="defer-blocked"]')).not.toBeNull();
    expect(root.querySelector('[data-field="defer-blocked"]')!.getAttribute("title"))
      .toContain("stall");
  });

  it("permits defer-all while a task is running", async () => {
    const api = new StubApi({
      "accept-cost": dryRunAccept(),
      "defer-tasks": dryRunRunningDefer(),
    });
    const modal = new DecisionModal(api, root, async () => {});
    const view = buildSessionView(sessionCase2Running());
    await modal.open(view, projectRateSkew());
    await flush();
    const kinds = modal.candidates().map((d) => d.kind);
    expect(kinds).toContain("defer-tasks");
    expect(root.querySelector('[data-field="defer-blocked"]')).toBeNull();
  });
});

describe("DecisionModal submission", () => {
  it("posts with the session's next sequence number", async () => {
    const api = new StubApi({
      "accept-cost": dryRunAccept(),
      "defer-tasks": dryRunDefer(),
    });
    const refreshed = vi.fn(async () => {});
    const modal = new DecisionModal(api, root, refreshed);
    const doc = sessionCase2();
    await modal.open(buildSessionView(doc), projectRateSkew());
    await flush();
    const accept = [...root.querySelectorAll('[data-field="what-if-card"]')].find(
      (c) => (c as HTMLElement).dataset.kind === "accept-cost",
    )!;
    (accept.querySelector('[data-field="commit"]') as HTMLButtonElement).click();
    await flush();
    expect(api.posted).toHaveLength(1);
    expect(api.posted[0]!.seq).toBe(doc.next_seq);
    expect(api.posted[0]!.decision).toEqual({ kind: "accept-cost" });
    expect(refreshed).toHaveBeenCalled();
  });

  it("recovers from a 409 by refetching state", async () => {
    const api = new StubApi({
      "accept-cost": dryRunAccept(),
      "defer-tasks": dryRunDefer(),
    });
    const { HttpError } = await import("../src/api.js");
    api.postDecision = () => Promise.reject(new HttpError(409, "stale"));
    const refreshed = vi.fn(async () => {});
    const modal = new DecisionModal(api, root, refreshed);
    await modal.open(buildSessionView(sessionCase2()), projectRateSkew());
    await flush();
    const card = root.querySelector('[data-field="what-if-card"]')!;
    (card.querySelector('[data-field="commit"]') as HTMLButtonElement).click();
    await flush();
    expect(refreshed).toHaveBeenCalled();
  });
});
