/**
 * Pure view-model builders. Every number a view model carries is copied from
 * a service response field (session state, dry-run projection, plan); the
 * only client-side work is classification and layout, never cost or time
 * arithmetic. This is what keeps the dashboard auditable against the
 * session's event log.
 */

import type {
  DecisionDoc,
  DryRunDoc,
  PromptDoc,
  ProjectDoc,
  SessionDoc,
  ShortfallDoc,
} from "./types.js";

export type TaskState = "pending" | "ready" | "running" | "completed";

export interface SessionView {
  id: string;
  projectId: string;
  phase: SessionDoc["phase"];
  clock: number;
  committedCost: number;
  idealT: number;
  idealC: number | null;
  taskStates: Record<string, TaskState>;
  runningRemaining: Record<string, number>;
  freeWorkers: string[];
  occupiedWorkers: string[];
  prompt: PromptDoc | null;
  schedule: SessionDoc["schedule"];
  trace: SessionDoc["concession_trace"];
  nextSeq: number;
}

export function buildSessionView(doc: SessionDoc): SessionView {
  const taskStates: Record<string, TaskState> = {};
  for (const id of doc.pending) taskStates[id] = "pending";
  for (const id of doc.ready) taskStates[id] = "ready";
  for (const row of doc.running) taskStates[row.task] = "running";
  for (const id of doc.completed) taskStates[id] = "completed";

  const runningRemaining: Record<string, number> = {};
  for (const row of doc.running) runningRemaining[row.task] = row.remaining;

  const free = new Set(doc.free_workers);
  const occupied = doc.workers.map((w) => w.id).filter((id) => !free.has(id));

  return {
    id: doc.id,
    projectId: doc.project_id,
    phase: doc.phase,
    clock: doc.clock,
    committedCost: doc.committed_cost,
    idealT: doc.ideal_point.t_star,
    idealC: doc.ideal_point.c_star,
    taskStates,
    runningRemaining,
    freeWorkers: [...doc.free_workers],
    occupiedWorkers: occupied,
    prompt: doc.prompt,
    schedule: doc.schedule,
    trace: doc.concession_trace,
    nextSeq: doc.next_seq,
  };
}

export interface ShortfallRow {
  tasks: string;
  workTypes: string;
  required: number;
  available: number;
  missing: number;
}

/** Case 1 table rows; a straight echo of the prompt's shortfall entries. */
export function shortfallTable(prompt: PromptDoc): ShortfallRow[] {
  return (prompt.shortfalls ?? []).map((row: ShortfallDoc) => ({
    tasks: row.tasks.join(", "),
    workTypes: row.work_types.join(", "),
    required: row.required,
    available: row.available,
    missing: row.missing,
  }));
}

export interface WhatIfCard {
  decision: DecisionDoc;
  label: string;
  deltaT: number | null;
  deltaC: number | null;
  nextCase: PromptDoc["case"] | null;
  pendingProbe: boolean;
}

export function describeDecision(decision: DecisionDoc): string {
  switch (decision.kind) {
    case "accept-cost":
      return "Accept the overrun";
    case "defer-tasks":
      return `Defer ${decision.tasks.join(", ")}`;
    case "add-workers":
      return `Hire ${decision.workers.map((w) => w.id).join(", ")}`;
  }
}

/** A card before its dry-run probe returns: values unknown, never guessed. */
export function pendingWhatIfCard(decision: DecisionDoc): WhatIfCard {
  return {
    decision,
    label: describeDecision(decision),
    deltaT: null,
    deltaC: null,
    nextCase: null,
    pendingProbe: true,
  };
}

/** Card values come exclusively from the /dry-run response. */
export function buildWhatIfCard(decision: DecisionDoc, probe: DryRunDoc): WhatIfCard {
  return {
    decision,
    label: describeDecision(decision),
    deltaT: probe.projected_t_delta,
    deltaC: probe.projected_c_delta,
    nextCase: probe.next_prompt ? probe.next_prompt.case : null,
    pendingProbe: false,
  };
}

/**
 * Mirror of the engine's progress rule: a deferral may not empty the ready
 * set while nothing is running. Used to disable the defer control.
 */
export function deferSelectionLegal(view: SessionView, selection: string[]): boolean {
  if (view.prompt === null || selection.length === 0) return false;
  const ready = new Set(view.prompt.ready);
  if (!selection.every((task) => ready.has(task))) return false;
  const runningCount = Object.keys(view.runningRemaining).length;
  if (selection.length === ready.size && runningCount === 0) return false;
  return true;
}

export interface GaugePoint {
  t: number;
  c: number;
}

/**
 * Committed (T, C) trajectory: one point per polled state change, so the
 * planner watches the run walk away from (or along) the ideal point.
 */
export function appendTrajectory(history: GaugePoint[], view: SessionView): GaugePoint[] {
  const last = history[history.length - 1];
  if (last && last.t === view.clock && last.c === view.committedCost) {
    return history;
  }
  return [...history, { t: view.clock, c: view.committedCost }];
}

export interface DagNode {
  id: string;
  layer: number;
  row: number;
  state: TaskState;
}

export interface DagEdge {
  from: string;
  to: string;
}

export interface DagLayout {
  nodes: DagNode[];
  edges: DagEdge[];
  layerCount: number;
  rowCount: number;
}

/** Layered DAG layout: layer = longest predecessor chain, rows alphabetical. */
export function layoutDag(
  project: ProjectDoc,
  taskStates: Record<string, TaskState>,
): DagLayout {
  const layerOf: Record<string, number> = {};
  const pending = new Map(project.tasks.map((t) => [t.id, t] as const));
  while (pending.size > 0) {
    let progressed = false;
    for (const [id, task] of [...pending]) {
      if (task.predecessors.every((p) => layerOf[p] !== undefined)) {
        layerOf[id] = task.predecessors.reduce(
          (depth, p) => Math.max(depth, (layerOf[p] ?? 0) + 1),
          0,
        );
        pending.delete(id);
        progressed = true;
      }
    }
    if (!progressed) throw new Error("project dependencies contain a cycle");
  }

  const byLayer = new Map<number, string[]>();
  for (const task of project.tasks) {
    const layer = layerOf[task.id] ?? 0;
    const bucket = byLayer.get(layer) ?? [];
    bucket.push(task.id);
    byLayer.set(layer, bucket);
  }

  const nodes: DagNode[] = [];
  let rowCount = 0;
  for (const [layer, ids] of byLayer) {
    ids.sort();
    rowCount = Math.max(rowCount, ids.length);
    ids.forEach((id, row) => {
      nodes.push({ id, layer, row, state: taskStates[id] ?? "pending" });
    });
  }
  nodes.sort((a, b) => a.layer - b.layer || a.row - b.row);

  const edges: DagEdge[] = [];
  for (const task of project.tasks) {
    for (const pred of [...task.predecessors].sort()) {
      edges.push({ from: pred, to: task.id });
    }
  }

  return { nodes, edges, layerCount: byLayer.size, rowCount };
}

export interface GanttRow {
  task: string;
  start: number;
  /** finish for done tasks, projected finish (clock + remaining) for running */
  end: number;
  done: boolean;
  cost: number;
  crew: string;
}

/** Gantt strip rows for every committed task, in schedule order. */
export function ganttRows(view: SessionView): GanttRow[] {
  return view.schedule.map((row) => ({
    task: row.task,
    start: row.start,
    end: row.finish ?? view.clock + (view.runningRemaining[row.task] ?? 0),
    done: row.finish !== null,
    cost: row.cost,
    crew: row.crew.map((a) => `${a.worker}:${a.work_type}`).join(" "),
  }));
}
