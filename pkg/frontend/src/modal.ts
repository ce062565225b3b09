/**
 * Decision modal: answers a pending prompt with accept / defer / hire,
 * previewing every candidate through the service's dry-run endpoint before
 * anything is committed. Posts carry the session's next sequence number; a
 * 409 means another client acted first, so we refetch and re-render.
 */

import { ApiClient, HttpError } from "./api.js";
import type { DecisionDoc, ProjectDoc, WorkerDoc } from "./types.js";
import { fmtNumber } from "./render.js";
import {
  SessionView,
  WhatIfCard,
  buildWhatIfCard,
  deferSelectionLegal,
  pendingWhatIfCard,
} from "./view.js";

export class DecisionModal {
  private selection = new Set<string>();
  private view: SessionView | null = null;
  private project: ProjectDoc | null = null;
  private probeToken = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly refresh: () => Promise<void>,
  ) {}

  close(): void {
    this.view = null;
    this.root.replaceChildren();
    this.root.classList.remove("open");
  }

  async open(view: SessionView, project: ProjectDoc): Promise<void> {
    this.view = view;
    this.project = project;
    this.selection = new Set(view.prompt?.ready ?? []);
    this.root.classList.add("open");
    this.renderControls();
    await this.refreshCards();
  }

  /** The candidate decisions the modal offers for the current prompt. */
  candidates(): DecisionDoc[] {
    if (!this.view?.prompt) return [];
    const prompt = this.view.prompt;
    const list: DecisionDoc[] = [];
    if (prompt.case === "cost-overrun") {
      list.push({ kind: "accept-cost" });
    }
    const chosen = [...this.selection].sort();
    if (deferSelectionLegal(this.view, chosen)) {
      list.push({ kind: "defer-tasks", tasks: chosen });
    }
    return list;
  }

  private renderControls(): void {
    const view = this.view;
    const prompt = view?.prompt;
    if (!view || !prompt) {
      this.close();
      return;
    }
    this.root.replaceChildren();

    const title = document.createElement("h3");
    title.textContent =
      prompt.case === "cost-overrun" ? "Cost overrun" : "Not enough workers";
    title.setAttribute("data-field", "prompt-case");
    title.dataset.case = prompt.case;
    this.root.appendChild(title);

    if (prompt.case === "cost-overrun") {
      const line = document.createElement("p");
      line.setAttribute("data-field", "overrun-line");
      line.textContent =
        `Joint staffing costs ${fmtNumber(prompt.proposed_cost ?? null)} against ` +
        `per-task minima of ${fmtNumber(prompt.baseline_cost ?? null)}; ` +
        `the concession is `;
      const amount = document.createElement("strong");
      amount.setAttribute("data-field", "overrun");
      amount.textContent = fmtNumber(prompt.overrun ?? null);
      line.appendChild(amount);
      this.root.appendChild(line);
    }

    const bound = document.createElement("p");
    bound.setAttribute("data-field", "defer-delay-bound");
    bound.textContent =
      `Any deferral delays the project by at least ${fmtNumber(prompt.defer_delay_bound)}.`;
    this.root.appendChild(bound);

    const picker = document.createElement("fieldset");
    picker.className = "defer-picker";
    const legend = document.createElement("legend");
    legend.textContent = "Defer which ready tasks?";
    picker.appendChild(legend);
    for (const taskId of prompt.ready) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = taskId;
      box.checked = this.selection.has(taskId);
      box.setAttribute("data-field", "defer-choice");
      box.addEventListener("change", () => {
        if (box.checked) this.selection.add(taskId);
        else this.selection.delete(taskId);
        this.renderControls();
        void this.refreshCards();
      });
      label.appendChild(box);
      label.appendChild(document.createTextNode(` ${taskId}`));
      picker.appendChild(label);
    }
    this.root.appendChild(picker);

    if (prompt.case === "infeasible" && this.project) {
      this.root.appendChild(this.buildHireForm(this.project));
    }

    const cards = document.createElement("div");
    cards.className = "cards";
    cards.setAttribute("data-field", "cards");
    this.root.appendChild(cards);
    this.renderCards(this.candidates().map(pendingWhatIfCard));
  }

  private buildHireForm(project: ProjectDoc): HTMLElement {
    const form = document.createElement("fieldset");
    form.className = "hire-form";
    form.setAttribute("data-field", "hire-form");
    const legend = document.createElement("legend");
    legend.textContent = "Hire an extra worker";
    form.appendChild(legend);

    const idInput = document.createElement("input");
    idInput.placeholder = "worker id";
    idInput.setAttribute("data-field", "hire-id");
    form.appendChild(idInput);

    const skillBoxes: HTMLInputElement[] = [];
    const rateInputs: HTMLInputElement[] = [];
    for (const workType of project.work_types) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = true;
      skillBoxes.push(box);
      label.appendChild(box);
      label.appendChild(document.createTextNode(` ${workType} rate `));
      const rate = document.createElement("input");
      rate.type = "number";
      rate.value = "1";
      rate.min = "0";
      rateInputs.push(rate);
      label.appendChild(rate);
      form.appendChild(label);
    }

    const button = document.createElement("button");
    button.textContent = "Hire and re-solve";
    button.setAttribute("data-field", "hire-submit");
    button.addEventListener("click", () => {
      const worker: WorkerDoc = {
        id: idInput.value.trim() || `hire-${Date.now()}`,
        skills: skillBoxes.map((box) => (box.checked ? 1 : 0)),
        rates: rateInputs.map((rate) => Number(rate.value) || 0),
      };
      void this.submit({ kind: "add-workers", workers: [worker] });
    });
    form.appendChild(button);
    return form;
  }

  private async refreshCards(): Promise<void> {
    const view = this.view;
    if (!view) return;
    const candidates = this.candidates();
    const token = ++this.probeToken;
    this.renderCards(candidates.map(pendingWhatIfCard));
    const cards: WhatIfCard[] = [];
    for (const decision of candidates) {
      const probe = await this.api.dryRun(view.id, decision);
      cards.push(buildWhatIfCard(decision, probe));
    }
    if (token === this.probeToken) this.renderCards(cards);
  }

  private renderCards(cards: WhatIfCard[]): void {
    const host = this.root.querySelector('[data-field="cards"]');
    if (!host) return;
    host.replaceChildren();
    const view = this.view;
    const prompt = view?.prompt;
    for (const card of cards) {
      const box = document.createElement("div");
      box.className = "card";
      box.setAttribute("data-field", "what-if-card");
      box.dataset.kind = card.decision.kind;

      const heading = document.createElement("h4");
      heading.textContent = card.label;
      box.appendChild(heading);

      const deltas = document.createElement("p");
      deltas.append("ΔT = ");
      const dt = document.createElement("span");
      dt.setAttribute("data-field", "delta-t");
      dt.textContent = card.pendingProbe ? "…" : fmtNumber(card.deltaT);
      deltas.appendChild(dt);
      deltas.append(", ΔC = ");
      const dc = document.createElement("span");
      dc.setAttribute("data-field", "delta-c");
      dc.textContent = card.pendingProbe ? "…" : fmtNumber(card.deltaC);
      deltas.appendChild(dc);
      box.appendChild(deltas);

      const next = document.createElement("p");
      next.setAttribute("data-field", "next-prompt");
      next.textContent = card.pendingProbe
        ? "probing…"
        : card.nextCase
          ? `next stop: ${card.nextCase}`
          : "runs to completion";
      box.appendChild(next);

      const button = document.createElement("button");
      button.textContent = "Commit";
      button.setAttribute("data-field", "commit");
      button.disabled = card.pendingProbe;
      button.addEventListener("click", () => void this.submit(card.decision));
      box.appendChild(button);
      host.appendChild(box);
    }

    if (prompt && view) {
      const chosen = [...this.selection].sort();
      if (chosen.length > 0 && !deferSelectionLegal(view, chosen)) {
        const note = document.createElement("p");
        note.className = "blocked";
        note.setAttribute("data-field", "defer-blocked");
        note.title =
          "Deferring every ready task while nothing is running would stall the session.";
        note.textContent = "Cannot defer all ready tasks: nothing is running.";
        host.appendChild(note);
      }
    }
  }

  private async submit(decision: DecisionDoc): Promise<void> {
    const view = this.view;
    if (!view) return;
    try {
      await this.api.postDecision(view.id, view.nextSeq, decision);
    } catch (error) {
      if (!(error instanceof HttpError && error.status === 409)) throw error;
      // another client acted; fall through to refetch
    }
    this.close();
    await this.refresh();
  }
}
