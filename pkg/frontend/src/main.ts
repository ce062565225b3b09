/**
 * Dashboard bootstrap. The page is stateless with respect to planning: all
 * state lives in the service, so a reload mid-session reproduces the view.
 *
 * URL parameters:
 *   ?session=<id>   attach to an existing session
 *   ?api=<base>     service base URL (defaults to same origin)
 */

import { ApiClient } from "./api.js";
import { DecisionModal } from "./modal.js";
import { SessionPoller } from "./poll.js";
import {
  renderDag,
  renderGantt,
  renderGauge,
  renderShortfalls,
  renderStatus,
  renderTrace,
  renderWorkers,
} from "./render.js";
import type { ProjectDoc, SessionDoc } from "./types.js";
import { GaugePoint, appendTrajectory, buildSessionView } from "./view.js";

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function attach(api: ApiClient, sessionId: string): Promise<void> {
  must("setup").hidden = true;
  must("dashboard").hidden = false;

  let project: ProjectDoc | null = null;
  let trajectory: GaugePoint[] = [];
  let lastPromptKey = "";
  const banner = must("banner");
  const modal = new DecisionModal(api, must("modal"), async () => {
    const doc = await api.getSession(sessionId);
    await handleUpdate(doc);
  });

  async function handleUpdate(doc: SessionDoc): Promise<void> {
    banner.hidden = true;
    if (!project) project = await api.getProject(doc.project_id);
    const view = buildSessionView(doc);
    trajectory = appendTrajectory(trajectory, view);
    renderStatus(must("status"), view);
    renderDag(must("dag"), project, view);
    renderGantt(must("gantt"), view);
    renderGauge(must("gauge"), trajectory, view);
    renderShortfalls(must("shortfalls"), view);
    renderWorkers(must("workers"), view);
    renderTrace(must("trace"), view);

    const promptKey = view.prompt
      ? `${view.nextSeq}:${view.prompt.case}:${view.prompt.ready.join(",")}`
      : "";
    if (view.phase === "awaiting-decision" && view.prompt && promptKey !== lastPromptKey) {
      lastPromptKey = promptKey;
      await modal.open(view, project);
    } else if (view.phase !== "awaiting-decision") {
      lastPromptKey = "";
      modal.close();
    }
  }

  const poller = new SessionPoller(api, sessionId, (doc) => void handleUpdate(doc), () => {
    banner.hidden = false;
    banner.textContent = "Service unreachable; retrying…";
  });
  poller.start();
}

async function setup(api: ApiClient): Promise<void> {
  must("dashboard").hidden = true;
  must("setup").hidden = false;
  const textarea = must("project-input") as HTMLTextAreaElement;
  const button = must("start-session") as HTMLButtonElement;
  const error = must("setup-error");
  button.addEventListener("click", () => {
    void (async () => {
      error.textContent = "";
      try {
        const doc = JSON.parse(textarea.value) as ProjectDoc;
        const { id } = await api.createProject(doc);
        const session = await api.createSession(id);
        const url = new URL(window.location.href);
        url.searchParams.set("session", session.id);
        window.location.href = url.toString();
      } catch (cause) {
        error.textContent = cause instanceof Error ? cause.message : String(cause);
      }
    })();
  });
}

export function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get("api") ?? "");
  const sessionId = params.get("session");
  if (sessionId) void attach(api, sessionId);
  else void setup(api);
}

boot();
