"""Resumable sequential-concessions engine.

A session walks the project forward in waves: admit every ready task, solve
the joint staffing problem over the free workers, and either commit the wave
(recording crews and cost, then advancing the clock to the next completion)
or surface a decision point. Case 1 prompts mean the free workers cannot
cover the ready demands; Case 2 prompts mean they can, but only at a cost
above the sum of the tasks' individual minima. The decision maker answers by
adding workers, deferring tasks, or accepting the overrun, and the engine
resumes mid-iteration. All transitions are deterministic, so a recorded
decision sequence replays to an identical session.
"""

from __future__ import annotations

import copy
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .bounds import t_min_wave
from .model import (
    ZERO_TOL,
    Hierarchy,
    PrecedenceSemantics,
    Project,
    Worker,
    require_valid,
)
from .staffing import (
    COST_TOL,
    Assignment,
    ProjectCost,
    Shortfall,
    StaffingResult,
    c_min_project,
    solve_joint_staffing,
    solve_task_staffing,
    total_demand,
)


class ProtocolError(RuntimeError):
    """The call is illegal in the session's current phase (state unchanged)."""


class EngineInvariantError(RuntimeError):
    """Internal conservation or progress invariant broken; indicates a bug."""


class Phase(Enum):
    ADVANCING = "advancing"
    AWAITING_DECISION = "awaiting-decision"
    COMPLETED = "completed"
    STALEMATE = "stalemate"


class CaseKind(Enum):
    #: Case 1: the free workers cannot staff the ready tasks at all.
    INFEASIBLE = "infeasible"
    #: Case 2: staffing is possible but costs more than the per-task minima.
    COST_OVERRUN = "cost-overrun"


@dataclass(frozen=True)
class DecisionPrompt:
    case: CaseKind
    ready: tuple[str, ...]
    #: Lower bound on the duration increase any deferral causes (min ready duration).
    defer_delay_bound: float
    ready_demand_totals: tuple[tuple[str, int], ...]
    shortfalls: tuple[Shortfall, ...] = ()
    proposed: tuple[Assignment, ...] = ()
    proposed_cost: float | None = None
    baseline_cost: float | None = None
    overrun: float | None = None


@dataclass(frozen=True)
class AddWorkers:
    """Enlarge the worker pool (answers Case 1 only)."""

    workers: tuple[Worker, ...]

    def __init__(self, workers: Iterable[Worker]) -> None:
        object.__setattr__(self, "workers", tuple(workers))


@dataclass(frozen=True)
class DeferTasks:
    """Push some ready tasks back to pending (answers either case)."""

    tasks: tuple[str, ...]

    def __init__(self, tasks: Iterable[str]) -> None:
        object.__setattr__(self, "tasks", tuple(sorted(set(str(t) for t in tasks))))


@dataclass(frozen=True)
class AcceptCost:
    """Commit the proposed wave at its overrun cost (answers Case 2 only)."""


Decision = AddWorkers | DeferTasks | AcceptCost


@dataclass(frozen=True)
class SessionConfig:
    semantics: PrecedenceSemantics = PrecedenceSemantics.START_TO_START
    #: Prompt on every non-empty wave, even when the overrun is zero.
    prompt_on_zero_overrun: bool = False


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    timestamp: float
    kind: str
    payload: dict[str, Any]


@dataclass(frozen=True)
class PlanRow:
    task_id: str
    start: float
    finish: float
    crew: tuple[Assignment, ...]
    cost: float


@dataclass(frozen=True)
class Plan:
    hierarchy: Hierarchy
    rows: tuple[PlanRow, ...]
    total_duration: float
    total_cost: float
    trace: tuple[tuple[DecisionPrompt, Decision], ...]


@dataclass(frozen=True)
class StalemateReport:
    reason: str
    prompt: DecisionPrompt | None = None


@dataclass(frozen=True)
class StateSummary:
    """What a scripted policy sees besides the prompt itself."""

    clock: float
    committed_cost: float
    t_star: float
    c_star: float | None
    running_tasks: int


@dataclass
class _Running:
    remaining: float
    crew: tuple[Assignment, ...]


@dataclass
class SessionState:
    """Mutable session state; mutate only through start_session/step/apply_decision.

    Single-writer: callers must serialize mutations per session. Snapshots
    taken between mutations are safe to read concurrently.
    """

    project: Project
    config: SessionConfig
    clock: float = 0.0
    committed_cost: float = 0.0
    pending: set[str] = field(default_factory=set)
    ready: set[str] = field(default_factory=set)
    running: dict[str, _Running] = field(default_factory=dict)
    completed: set[str] = field(default_factory=set)
    workers: dict[str, Worker] = field(default_factory=dict)
    free_workers: set[str] = field(default_factory=set)
    phase: Phase = Phase.ADVANCING
    prompt: DecisionPrompt | None = None
    log: list[SessionEvent] = field(default_factory=list)
    trace: list[tuple[DecisionPrompt, Decision]] = field(default_factory=list)
    plan: Plan | None = None
    stalemate: StalemateReport | None = None
    t_min_ref: float = 0.0
    c_min_ref: ProjectCost | None = None
    starts: dict[str, float] = field(default_factory=dict)
    finishes: dict[str, float] = field(default_factory=dict)
    crews: dict[str, tuple[Assignment, ...]] = field(default_factory=dict)
    task_costs: dict[str, float] = field(default_factory=dict)
    _baselines: dict[str, float] = field(default_factory=dict)
    _pending_result: StaffingResult | None = None
    _last_case1_signature: tuple | None = None
    _seq: int = 0

    def summary(self) -> StateSummary:
        c_star = self.c_min_ref.total if self.c_min_ref and self.c_min_ref.feasible else None
        return StateSummary(
            clock=self.clock,
            committed_cost=self.committed_cost,
            t_star=self.t_min_ref,
            c_star=c_star,
            running_tasks=len(self.running),
        )


def assignment_payload(entry: Assignment, work_types: Sequence[str]) -> dict[str, Any]:
    return {
        "worker": entry.worker_id,
        "task": entry.task_id,
        "work_type": work_types[entry.work_index],
    }


def shortfall_payload(row: Shortfall, work_types: Sequence[str]) -> dict[str, Any]:
    return {
        "tasks": list(row.task_ids),
        "work_types": [work_types[q] for q in row.work_indices],
        "required": row.required,
        "available": row.available,
        "missing": row.missing,
    }


def prompt_payload(prompt: DecisionPrompt, work_types: Sequence[str]) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "case": prompt.case.value,
        "ready": list(prompt.ready),
        "defer_delay_bound": prompt.defer_delay_bound,
        "ready_demand_totals": [[tid, n] for tid, n in prompt.ready_demand_totals],
    }
    if prompt.case is CaseKind.INFEASIBLE:
        doc["shortfalls"] = [shortfall_payload(s, work_types) for s in prompt.shortfalls]
    else:
        doc["proposed"] = [assignment_payload(e, work_types) for e in prompt.proposed]
        doc["proposed_cost"] = prompt.proposed_cost
        doc["baseline_cost"] = prompt.baseline_cost
        doc["overrun"] = prompt.overrun
    return doc


def decision_payload(decision: Decision) -> dict[str, Any]:
    if isinstance(decision, AcceptCost):
        return {"kind": "accept-cost"}
    if isinstance(decision, DeferTasks):
        return {"kind": "defer-tasks", "tasks": list(decision.tasks)}
    return {
        "kind": "add-workers",
        "workers": [
            {
                "id": w.id,
                "skills": [1 if s else 0 for s in w.skills],
                "rates": list(w.rates),
            }
            for w in decision.workers
        ],
    }


def start_session(project: Project, config: SessionConfig | None = None) -> SessionState:
    """Open a session at clock zero with every task pending and every worker free.

    The duration and cost components of the ideal point are computed up front
    for reference; an infeasible cost estimate does not block the session
    (the first wave will raise a Case 1 prompt instead).
    """
    require_valid(project)
    config = config or SessionConfig()
    state = SessionState(project=project, config=config)
    state.pending = {task.id for task in project.tasks}
    state.workers = {worker.id: worker for worker in project.workers}
    if len(state.workers) != len(project.workers):
        raise ProtocolError("duplicate worker ids in project")
    state.free_workers = set(state.workers)
    state.t_min_ref = t_min_wave(project, config.semantics).total_duration
    state.c_min_ref = c_min_project(project)
    state._baselines = dict(state.c_min_ref.per_task)
    _emit(
        state,
        "session-started",
        {
            "tasks": len(project.tasks),
            "workers": len(project.workers),
            "semantics": config.semantics.value,
            "t_min": state.t_min_ref,
            "c_min": state.c_min_ref.total,
        },
    )
    return state


def step(state: SessionState) -> SessionEvent:
    """Run one engine iteration: admit, staff, commit, advance.

    Stops mid-iteration with phase AwaitingDecision when a prompt is raised;
    resume with apply_decision. Returns the last event appended.
    """
    if state.phase is not Phase.ADVANCING:
        raise ProtocolError(f"step() illegal in phase {state.phase.value}")
    _admit(state)
    _resolve_wave(state)
    return state.log[-1]


def apply_decision(state: SessionState, decision: Decision) -> SessionState:
    """Answer the pending prompt and resume the interrupted iteration.

    Illegal decisions raise ProtocolError and leave the state untouched.
    """
    if state.phase is not Phase.AWAITING_DECISION or state.prompt is None:
        raise ProtocolError("no decision is pending")
    prompt = state.prompt
    _validate_decision(state, prompt, decision)

    state.trace.append((prompt, decision))
    _emit(state, "decision", decision_payload(decision))
    state.prompt = None
    pending_result = state._pending_result
    state._pending_result = None
    state.phase = Phase.ADVANCING

    if isinstance(decision, AcceptCost):
        assert pending_result is not None
        _commit(state, pending_result)
        _advance(state)
    elif isinstance(decision, AddWorkers):
        for worker in decision.workers:
            state.workers[worker.id] = worker
            state.free_workers.add(worker.id)
        state._baselines.clear()
        _resolve_wave(state)
    else:
        state.ready -= set(decision.tasks)
        state.pending |= set(decision.tasks)
        _resolve_wave(state)
    return state


@dataclass(frozen=True)
class DryRunProjection:
    projected_t_delta: float
    projected_c_delta: float
    next_prompt: DecisionPrompt | None


def dry_run(state: SessionState, decision: Decision) -> DryRunProjection:
    """Preview a decision: apply it on a copy and auto-step to the next prompt."""
    if state.phase is not Phase.AWAITING_DECISION or state.prompt is None:
        raise ProtocolError("no decision is pending")
    clone = copy.deepcopy(state)
    apply_decision(clone, decision)
    while clone.phase is Phase.ADVANCING:
        step(clone)
    return DryRunProjection(
        projected_t_delta=clone.clock - state.clock,
        projected_c_delta=clone.committed_cost - state.committed_cost,
        next_prompt=clone.prompt,
    )


@dataclass(frozen=True)
class RunResult:
    state: SessionState
    plan: Plan | None
    stalemate: StalemateReport | None

    @property
    def completed(self) -> bool:
        return self.plan is not None


def run_to_completion(
    project: Project,
    policy: Any,
    config: SessionConfig | None = None,
) -> RunResult:
    """Drive a session with a scripted policy until Completed or Stalemate.

    ``policy`` is anything with ``decide(prompt, summary)``; any non-Decision
    return value counts as an abstention and stalls the session.
    """
    state = start_session(project, config)
    return drive(state, policy)


def drive(state: SessionState, policy: Any) -> RunResult:
    """Advance an existing session to a terminal phase using a policy."""
    while True:
        if state.phase is Phase.ADVANCING:
            step(state)
        elif state.phase is Phase.AWAITING_DECISION:
            assert state.prompt is not None
            decision = policy.decide(state.prompt, state.summary())
            if not isinstance(decision, (AddWorkers, DeferTasks, AcceptCost)):
                _declare_stalemate(state, "policy abstained", state.prompt)
            else:
                apply_decision(state, decision)
        elif state.phase is Phase.COMPLETED:
            return RunResult(state, state.plan, None)
        else:
            return RunResult(state, None, state.stalemate)


def replay_decisions(
    project: Project,
    decisions: Sequence[Decision],
    config: SessionConfig | None = None,
) -> SessionState:
    """Re-drive a fresh session from a recorded decision sequence.

    Determinism makes the replayed session identical to the original; if the
    sequence is exhausted at a prompt the state is returned still awaiting.
    """
    state = start_session(project, config)
    queue = list(decisions)
    while True:
        if state.phase is Phase.ADVANCING:
            step(state)
        elif state.phase is Phase.AWAITING_DECISION and queue:
            apply_decision(state, queue.pop(0))
        else:
            return state


def check_conservation(state: SessionState) -> None:
    """Assert worker conservation: free plus crewed equals the full pool."""
    crewed: set[str] = set()
    for running in state.running.values():
        for entry in running.crew:
            if entry.worker_id in crewed:
                raise EngineInvariantError(f"worker {entry.worker_id} in two crews")
            crewed.add(entry.worker_id)
    if crewed & state.free_workers:
        raise EngineInvariantError("worker simultaneously free and crewed")
    if crewed | state.free_workers != set(state.workers):
        raise EngineInvariantError("worker pool not conserved")


def _emit(state: SessionState, kind: str, payload: dict[str, Any]) -> SessionEvent:
    state._seq += 1
    event = SessionEvent(state._seq, state.clock, kind, payload)
    state.log.append(event)
    return event


def _admit(state: SessionState) -> None:
    begun = state.completed | set(state.running)
    if state.config.semantics is PrecedenceSemantics.FINISH_TO_START:
        begun = set(state.completed)
    admitted = sorted(
        tid
        for tid in state.pending
        if state.project.task_map[tid].predecessors <= begun
    )
    if admitted:
        state.pending -= set(admitted)
        state.ready |= set(admitted)
        _emit(state, "tasks-admitted", {"tasks": admitted})


def _resolve_wave(state: SessionState) -> None:
    ready_ids = sorted(state.ready)
    tasks = [state.project.task_map[tid] for tid in ready_ids]
    free = [state.workers[wid] for wid in sorted(state.free_workers)]
    result = solve_joint_staffing(tasks, free)

    if not result.feasible:
        prompt = DecisionPrompt(
            case=CaseKind.INFEASIBLE,
            ready=tuple(ready_ids),
            defer_delay_bound=min(t.duration for t in tasks),
            ready_demand_totals=tuple((t.id, total_demand(t)) for t in tasks),
            shortfalls=result.shortfalls,
        )
        _raise_prompt(state, prompt, None)
        return

    if ready_ids:
        baseline = sum(_baseline_cost(state, tid) for tid in ready_ids)
        overrun = float(result.cost or 0.0) - baseline
        if overrun < -COST_TOL:
            raise EngineInvariantError("joint optimum beat the per-task minima")
        overrun = max(overrun, 0.0)
        if overrun > COST_TOL or state.config.prompt_on_zero_overrun:
            prompt = DecisionPrompt(
                case=CaseKind.COST_OVERRUN,
                ready=tuple(ready_ids),
                defer_delay_bound=min(t.duration for t in tasks),
                ready_demand_totals=tuple((t.id, total_demand(t)) for t in tasks),
                proposed=result.entries,
                proposed_cost=float(result.cost or 0.0),
                baseline_cost=baseline,
                overrun=overrun,
            )
            _raise_prompt(state, prompt, result)
            return

    _commit(state, result)
    _advance(state)


def _baseline_cost(state: SessionState, task_id: str) -> float:
    cached = state._baselines.get(task_id)
    if cached is None:
        result = solve_task_staffing(
            state.project.task_map[task_id], list(state.workers.values())
        )
        if not result.feasible:
            raise EngineInvariantError(
                f"task {task_id} jointly staffable but not individually"
            )
        cached = float(result.cost or 0.0)
        state._baselines[task_id] = cached
    return cached


def _raise_prompt(
    state: SessionState, prompt: DecisionPrompt, result: StaffingResult | None
) -> None:
    if prompt.case is CaseKind.INFEASIBLE:
        signature = (
            prompt.ready,
            tuple(sorted(state.free_workers)),
            tuple(sorted(state.workers)),
            tuple(sorted((tid, run.remaining) for tid, run in state.running.items())),
        )
        if signature == state._last_case1_signature:
            _declare_stalemate(state, "no decision changed the staffing deadlock", prompt)
            return
        state._last_case1_signature = signature
    state.prompt = prompt
    state._pending_result = result
    state.phase = Phase.AWAITING_DECISION
    _emit(state, "prompt", prompt_payload(prompt, state.project.work_types))


def _declare_stalemate(
    state: SessionState, reason: str, prompt: DecisionPrompt | None
) -> None:
    state.phase = Phase.STALEMATE
    state.prompt = None
    state._pending_result = None
    state.stalemate = StalemateReport(reason, prompt)
    payload: dict[str, Any] = {"reason": reason}
    if prompt is not None:
        payload["prompt"] = prompt_payload(prompt, state.project.work_types)
    _emit(state, "stalemate", payload)


def _validate_decision(
    state: SessionState, prompt: DecisionPrompt, decision: Decision
) -> None:
    if isinstance(decision, AcceptCost):
        if prompt.case is not CaseKind.COST_OVERRUN:
            raise ProtocolError("AcceptCost only answers a cost-overrun prompt")
        return
    if isinstance(decision, AddWorkers):
        if prompt.case is not CaseKind.INFEASIBLE:
            raise ProtocolError("AddWorkers only answers an infeasible prompt")
        if not decision.workers:
            raise ProtocolError("AddWorkers requires at least one worker")
        q = state.project.num_work_types
        seen: set[str] = set()
        for worker in decision.workers:
            if len(worker.skills) != q or len(worker.rates) != q:
                raise ProtocolError(
                    f"worker {worker.id!r} skills/rates must have length {q}"
                )
            if worker.id in state.workers or worker.id in seen:
                raise ProtocolError(f"worker id {worker.id!r} already in the pool")
            seen.add(worker.id)
        return
    if isinstance(decision, DeferTasks):
        chosen = set(decision.tasks)
        if not chosen:
            raise ProtocolError("DeferTasks requires at least one task")
        if not chosen <= state.ready:
            extra = sorted(chosen - state.ready)
            raise ProtocolError(f"cannot defer tasks not ready: {extra}")
        if chosen == state.ready and not state.running:
            raise ProtocolError(
                "cannot defer every ready task while nothing is running"
            )
        return
    raise ProtocolError(f"unknown decision type {type(decision).__name__}")


def _commit(state: SessionState, result: StaffingResult) -> None:
    committed = sorted(state.ready)
    if committed:
        by_task: dict[str, list[Assignment]] = {tid: [] for tid in committed}
        for entry in result.entries:
            by_task[entry.task_id].append(entry)
        for tid in committed:
            crew = tuple(sorted(by_task[tid], key=lambda e: e.sort_key))
            task = state.project.task_map[tid]
            state.running[tid] = _Running(task.duration, crew)
            state.starts[tid] = state.clock
            state.crews[tid] = crew
            state.task_costs[tid] = sum(
                state.workers[e.worker_id].rates[e.work_index] * task.duration
                for e in crew
            )
            for entry in crew:
                state.free_workers.discard(entry.worker_id)
        state.ready.clear()
        state.committed_cost += float(result.cost or 0.0)
        state._last_case1_signature = None
        _emit(
            state,
            "commit",
            {
                "tasks": committed,
                "cost": float(result.cost or 0.0),
                "entries": [
                    assignment_payload(e, state.project.work_types)
                    for e in result.entries
                ],
            },
        )


def _advance(state: SessionState) -> None:
    if not state.running:
        if not state.pending and not state.ready:
            _complete_session(state)
            return
        raise EngineInvariantError("no task is running but tasks remain")
    delta = min(run.remaining for run in state.running.values())
    state.clock += delta
    completed_now: list[str] = []
    for tid in sorted(state.running):
        run = state.running[tid]
        run.remaining -= delta
        if run.remaining <= ZERO_TOL:
            completed_now.append(tid)
    released: list[str] = []
    for tid in completed_now:
        run = state.running.pop(tid)
        state.completed.add(tid)
        state.finishes[tid] = state.clock
        for entry in run.crew:
            state.free_workers.add(entry.worker_id)
            released.append(entry.worker_id)
    _emit(
        state,
        "advance",
        {
            "delta": delta,
            "clock": state.clock,
            "completed": completed_now,
            "released": sorted(released),
        },
    )
    if not state.pending and not state.ready and not state.running:
        _complete_session(state)


def _complete_session(state: SessionState) -> None:
    ordering = sorted(state.starts, key=lambda tid: (state.starts[tid], tid))
    rows = tuple(
        PlanRow(
            task_id=tid,
            start=state.starts[tid],
            finish=state.finishes[tid],
            crew=state.crews[tid],
            cost=state.task_costs[tid],
        )
        for tid in ordering
    )
    state.plan = Plan(
        hierarchy=Hierarchy(ordering),
        rows=rows,
        total_duration=state.clock,
        total_cost=state.committed_cost,
        trace=tuple(state.trace),
    )
    state.phase = Phase.COMPLETED
    _emit(
        state,
        "session-completed",
        {"total_duration": state.clock, "total_cost": state.committed_cost},
    )


__all__ = [
    "AcceptCost",
    "AddWorkers",
    "CaseKind",
    "Decision",
    "DecisionPrompt",
    "DeferTasks",
    "DryRunProjection",
    "EngineInvariantError",
    "Phase",
    "Plan",
    "PlanRow",
    "ProtocolError",
    "RunResult",
    "SessionConfig",
    "SessionEvent",
    "SessionState",
    "StalemateReport",
    "StateSummary",
    "apply_decision",
    "assignment_payload",
    "check_conservation",
    "decision_payload",
    "drive",
    "dry_run",
    "prompt_payload",
    "replay_decisions",
    "run_to_completion",
    "shortfall_payload",
    "start_session",
    "step",
]
