/** Thin fetch client for the planning service's wire API. */

import type {
  BoundsDoc,
  DecisionDoc,
  DryRunDoc,
  PlanDoc,
  ProjectDoc,
  SessionDoc,
} from "./types.js";

export class HttpError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new HttpError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  createProject(doc: ProjectDoc): Promise<{ id: string }> {
    return request(this.url("/projects"), {
      method: "POST",
      body: JSON.stringify(doc),
    });
  }

  getProject(projectId: string): Promise<ProjectDoc> {
    return request(this.url(`/projects/${projectId}`));
  }

  getBounds(projectId: string): Promise<BoundsDoc> {
    return request(this.url(`/projects/${projectId}/bounds`));
  }

  getIdeal(projectId: string): Promise<Record<string, unknown>> {
    return request(this.url(`/projects/${projectId}/ideal`));
  }

  createSession(projectId: string, config?: Record<string, unknown>): Promise<SessionDoc> {
    return request(this.url("/sessions"), {
      method: "POST",
      body: JSON.stringify({ project_id: projectId, config }),
    });
  }

  listSessions(): Promise<{ sessions: { id: string; phase: string }[] }> {
    return request(this.url("/sessions"));
  }

  getSession(sessionId: string): Promise<SessionDoc> {
    return request(this.url(`/sessions/${sessionId}`));
  }

  postDecision(sessionId: string, seq: number, decision: DecisionDoc): Promise<SessionDoc> {
    return request(this.url(`/sessions/${sessionId}/decisions`), {
      method: "POST",
      body: JSON.stringify({ seq, decision }),
    });
  }

  dryRun(sessionId: string, decision: DecisionDoc): Promise<DryRunDoc> {
    return request(this.url(`/sessions/${sessionId}/dry-run`), {
      method: "POST",
      body: JSON.stringify({ decision }),
    });
  }

  getPlan(sessionId: string): Promise<PlanDoc> {
    return request(this.url(`/sessions/${sessionId}/plan`));
  }
}
