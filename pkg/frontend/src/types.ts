/**
 * Wire types mirroring the planning service's canonical JSON documents.
 * The dashboard never recomputes planning numbers; it renders these fields.
 */

export type Phase = "advancing" | "awaiting-decision" | "completed" | "stalemate";

export type CaseKind = "infeasible" | "cost-overrun";

export interface AssignmentDoc {
  worker: string;
  task: string;
  work_type: string;
}

export interface ShortfallDoc {
  tasks: string[];
  work_types: string[];
  required: number;
  available: number;
  missing: number;
}

export interface PromptDoc {
  case: CaseKind;
  ready: string[];
  defer_delay_bound: number;
  ready_demand_totals: [string, number][];
  shortfalls?: ShortfallDoc[];
  proposed?: AssignmentDoc[];
  proposed_cost?: number;
  baseline_cost?: number;
  overrun?: number;
}

export interface WorkerDoc {
  id: string;
  skills: number[];
  rates: number[];
}

export type DecisionDoc =
  | { kind: "accept-cost" }
  | { kind: "defer-tasks"; tasks: string[] }
  | { kind: "add-workers"; workers: WorkerDoc[] };

export interface RunningDoc {
  task: string;
  remaining: number;
  crew: AssignmentDoc[];
}

export interface ScheduleRowDoc {
  task: string;
  start: number;
  finish: number | null;
  cost: number;
  crew: AssignmentDoc[];
}

export interface TraceEntryDoc {
  prompt: PromptDoc;
  decision: DecisionDoc;
}

export interface SessionDoc {
  id: string;
  project_id: string;
  phase: Phase;
  clock: number;
  committed_cost: number;
  ideal_point: { t_star: number; c_star: number | null };
  pending: string[];
  ready: string[];
  running: RunningDoc[];
  completed: string[];
  schedule: ScheduleRowDoc[];
  free_workers: string[];
  workers: WorkerDoc[];
  prompt: PromptDoc | null;
  concession_trace: TraceEntryDoc[];
  config: { semantics: string; prompt_on_zero_overrun: boolean };
  next_seq: number;
}

export interface DryRunDoc {
  projected_t_delta: number;
  projected_c_delta: number;
  next_prompt: PromptDoc | null;
}

export interface TaskDoc {
  id: string;
  predecessors: string[];
  work: number[];
  resources: number[];
  duration: number;
  declared_cost: number | null;
}

export interface ProjectDoc {
  schema_version: number;
  work_types: string[];
  resource_types: string[];
  budget: number | null;
  deadline: number | null;
  tasks: TaskDoc[];
  workers: WorkerDoc[];
}

export interface PlanRowDoc {
  task: string;
  start: number;
  finish: number;
  crew: AssignmentDoc[];
  cost: number;
}

export interface PlanDoc {
  schema_version: number;
  total_duration: number;
  total_cost: number;
  hierarchy: string[];
  schedule: PlanRowDoc[];
  concession_trace: TraceEntryDoc[];
}

export interface BoundsDoc {
  semantics: string;
  t_min: number;
  t_max: number;
  critical_path_length: number;
  critical_path: string[];
}
