"""Canonical document formats: project files, plan exports, session logs.

All numbers in emitted documents use fixed 9-fractional-digit decimal
formatting and object keys are sorted, so equal values always serialize to
identical bytes (golden-file and replay comparisons rely on this). Exact
load/save round-trips therefore hold for data quantized to 1e-9, matching
the package-wide tolerance.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping, Sequence
from typing import Any

from .bounds import critical_path, duration_range
from .engine import (
    AcceptCost,
    AddWorkers,
    Decision,
    DeferTasks,
    Plan,
    SessionConfig,
    SessionEvent,
    SessionState,
    assignment_payload,
    decision_payload,
    prompt_payload,
    shortfall_payload,
)
from .model import (
    PrecedenceSemantics,
    Project,
    Task,
    ValidationReport,
    Worker,
    validate_project,
)
from .staffing import ProjectCost, c_min_project, ideal_point

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    """A document failed to parse or validate."""

    def __init__(self, message: str, report: ValidationReport | None = None) -> None:
        self.report = report
        super().__init__(message)


def format_number(value: float | int) -> str:
    """Fixed-format a number: integers verbatim, floats with 9 decimals."""
    if isinstance(value, bool):
        raise DocumentError("booleans are not numbers")
    if isinstance(value, int):
        return str(value)
    if not math.isfinite(value):
        raise DocumentError(f"non-finite number {value!r}")
    if value == 0.0:
        value = 0.0
    return f"{value:.9f}"


def canonical_dumps(value: Any, pretty: bool = True) -> str:
    """Serialize to canonical JSON: sorted keys, fixed number formatting."""
    pieces: list[str] = []
    _write(value, pieces, 0, pretty)
    return "".join(pieces)


def _write(value: Any, out: list[str], depth: int, pretty: bool) -> None:
    if value is None:
        out.append("null")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, (int, float)):
        out.append(format_number(value))
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, Mapping):
        items = sorted(value.items())
        if not items:
            out.append("{}")
            return
        open_, close, pad, sep = _frames("{", "}", depth, pretty)
        out.append(open_)
        for index, (key, item) in enumerate(items):
            if not isinstance(key, str):
                raise DocumentError(f"object keys must be strings, got {key!r}")
            out.append(f"{pad}{json.dumps(key, ensure_ascii=False)}:{' ' if pretty else ''}")
            _write(item, out, depth + 1, pretty)
            if index < len(items) - 1:
                out.append(sep)
        out.append(close)
    elif isinstance(value, (list, tuple)):
        if not value:
            out.append("[]")
            return
        open_, close, pad, sep = _frames("[", "]", depth, pretty)
        out.append(open_)
        for index, item in enumerate(value):
            out.append(pad)
            _write(item, out, depth + 1, pretty)
            if index < len(value) - 1:
                out.append(sep)
        out.append(close)
    else:
        raise DocumentError(f"cannot serialize {type(value).__name__}")


def _frames(open_ch: str, close_ch: str, depth: int, pretty: bool) -> tuple[str, str, str, str]:
    if not pretty:
        return open_ch, close_ch, "", ","
    inner = "  " * (depth + 1)
    outer = "  " * depth
    return f"{open_ch}\n", f"\n{outer}{close_ch}", inner, ",\n"


def project_to_doc(project: Project) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "work_types": list(project.work_types),
        "resource_types": list(project.resource_types),
        "budget": project.budget,
        "deadline": project.deadline,
        "tasks": [
            {
                "id": task.id,
                "predecessors": sorted(task.predecessors),
                "work": list(task.work),
                "resources": list(task.resources),
                "duration": task.duration,
                "declared_cost": task.declared_cost,
            }
            for task in project.tasks
        ],
        "workers": [
            {
                "id": worker.id,
                "skills": [1 if s else 0 for s in worker.skills],
                "rates": list(worker.rates),
            }
            for worker in project.workers
        ],
    }


def doc_to_project(doc: Any) -> Project:
    """Build and validate a Project from a parsed document."""
    if not isinstance(doc, Mapping):
        raise DocumentError("project document must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {version!r}")
    try:
        tasks = [
            Task(
                id=entry["id"],
                predecessors=entry.get("predecessors", ()),
                work=entry.get("work", ()),
                resources=entry.get("resources", ()),
                duration=entry["duration"],
                declared_cost=entry.get("declared_cost"),
            )
            for entry in doc.get("tasks", ())
        ]
        workers = [
            Worker(
                id=entry["id"],
                skills=entry.get("skills", ()),
                rates=entry.get("rates", ()),
            )
            for entry in doc.get("workers", ())
        ]
        project = Project(
            work_types=doc.get("work_types", ()),
            resource_types=doc.get("resource_types", ()),
            tasks=tasks,
            workers=workers,
            budget=doc.get("budget"),
            deadline=doc.get("deadline"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed project document: {exc}") from exc
    report = validate_project(project)
    if not report.is_valid:
        details = "; ".join(f"{v.subject}: {v.message}" for v in report.violations)
        raise DocumentError(f"invalid project: {details}", report)
    return project


def save_project(project: Project) -> bytes:
    """Canonical project document bytes (stable across save/load/save)."""
    return (canonical_dumps(project_to_doc(project)) + "\n").encode("utf-8")


def load_project(data: bytes | str) -> Project:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from exc
    return doc_to_project(doc)


def validation_doc(report: ValidationReport) -> dict[str, Any]:
    return {
        "valid": report.is_valid,
        "violations": [
            {"kind": v.kind.value, "subject": v.subject, "message": v.message}
            for v in report.violations
        ],
    }


def bounds_doc(
    project: Project,
    semantics: PrecedenceSemantics = PrecedenceSemantics.FINISH_TO_START,
) -> dict[str, Any]:
    window = duration_range(project, semantics)
    length, path = critical_path(project)
    return {
        "semantics": semantics.value,
        "t_min": window.t_min,
        "t_max": window.t_max,
        "critical_path_length": length,
        "critical_path": list(path),
    }


def cost_report_doc(report: ProjectCost, work_types: Sequence[str]) -> dict[str, Any]:
    doc: dict[str, Any] = {"feasible": report.feasible}
    if report.feasible:
        doc["total"] = report.total
        doc["per_task"] = dict(report.per_task)
    else:
        doc["failures"] = [shortfall_payload(s, work_types) for s in report.failures]
        doc["per_task"] = dict(report.per_task)
    return doc


def ideal_doc(
    project: Project,
    semantics: PrecedenceSemantics = PrecedenceSemantics.FINISH_TO_START,
) -> dict[str, Any]:
    report = c_min_project(project)
    if not report.feasible:
        return cost_report_doc(report, project.work_types)
    point = ideal_point(project, semantics)
    return {"feasible": True, "t_star": point.t_star, "c_star": point.c_star}


def plan_to_doc(plan: Plan, project: Project) -> dict[str, Any]:
    work_types = project.work_types
    return {
        "schema_version": SCHEMA_VERSION,
        "total_duration": plan.total_duration,
        "total_cost": plan.total_cost,
        "hierarchy": list(plan.hierarchy.ordering),
        "schedule": [
            {
                "task": row.task_id,
                "start": row.start,
                "finish": row.finish,
                "crew": [assignment_payload(e, work_types) for e in row.crew],
                "cost": row.cost,
            }
            for row in plan.rows
        ],
        "concession_trace": [
            {
                "prompt": prompt_payload(prompt, work_types),
                "decision": decision_payload(decision),
            }
            for prompt, decision in plan.trace
        ],
    }


def plan_to_csv(plan: Plan, project: Project) -> str:
    """Flat tabular schedule: one row per task for spreadsheet import."""
    lines = ["task,start,finish,crew,cost"]
    for row in plan.rows:
        crew = ";".join(
            f"{e.worker_id}={project.work_types[e.work_index]}" for e in row.crew
        )
        lines.append(
            ",".join(
                [
                    row.task_id,
                    format_number(row.start),
                    format_number(row.finish),
                    crew,
                    format_number(row.cost),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def decision_from_doc(doc: Any) -> Decision:
    if not isinstance(doc, Mapping):
        raise DocumentError("decision must be an object")
    kind = doc.get("kind")
    if kind == "accept-cost":
        return AcceptCost()
    if kind == "defer-tasks":
        tasks = doc.get("tasks")
        if not isinstance(tasks, Sequence) or isinstance(tasks, str):
            raise DocumentError("defer-tasks needs a task id list")
        return DeferTasks(str(t) for t in tasks)
    if kind == "add-workers":
        entries = doc.get("workers")
        if not isinstance(entries, Sequence):
            raise DocumentError("add-workers needs a worker list")
        try:
            workers = [
                Worker(
                    id=entry["id"],
                    skills=entry.get("skills", ()),
                    rates=entry.get("rates", ()),
                )
                for entry in entries
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed worker entry: {exc}") from exc
        return AddWorkers(workers)
    raise DocumentError(f"unknown decision kind {kind!r}")


def config_to_doc(config: SessionConfig) -> dict[str, Any]:
    return {
        "semantics": config.semantics.value,
        "prompt_on_zero_overrun": config.prompt_on_zero_overrun,
    }


def config_from_doc(doc: Any) -> SessionConfig:
    if doc is None:
        return SessionConfig()
    if not isinstance(doc, Mapping):
        raise DocumentError("config must be an object")
    semantics_raw = doc.get("semantics", PrecedenceSemantics.START_TO_START.value)
    try:
        semantics = PrecedenceSemantics(semantics_raw)
    except ValueError as exc:
        raise DocumentError(f"unknown semantics {semantics_raw!r}") from exc
    return SessionConfig(
        semantics=semantics,
        prompt_on_zero_overrun=bool(doc.get("prompt_on_zero_overrun", False)),
    )


def event_to_line(event: SessionEvent) -> str:
    """One self-contained session-log line per event."""
    return canonical_dumps(
        {
            "seq": event.seq,
            "timestamp": event.timestamp,
            "kind": event.kind,
            "payload": event.payload,
        },
        pretty=False,
    )


def parse_event_line(line: str) -> dict[str, Any]:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed log line: {exc}") from exc
    if not isinstance(doc, dict) or not {"seq", "timestamp", "kind", "payload"} <= set(doc):
        raise DocumentError("log line missing required fields")
    return doc


def session_to_doc(state: SessionState, session_id: str, next_seq: int) -> dict[str, Any]:
    work_types = state.project.work_types
    summary = state.summary()
    return {
        "id": session_id,
        "phase": state.phase.value,
        "clock": state.clock,
        "committed_cost": state.committed_cost,
        "ideal_point": {"t_star": summary.t_star, "c_star": summary.c_star},
        "pending": sorted(state.pending),
        "ready": sorted(state.ready),
        "running": [
            {
                "task": tid,
                "remaining": run.remaining,
                "crew": [assignment_payload(e, work_types) for e in run.crew],
            }
            for tid, run in sorted(state.running.items())
        ],
        "completed": sorted(state.completed),
        "schedule": [
            {
                "task": tid,
                "start": state.starts[tid],
                "finish": state.finishes.get(tid),
                "cost": state.task_costs[tid],
                "crew": [
                    assignment_payload(e, work_types) for e in state.crews[tid]
                ],
            }
            for tid in sorted(state.starts, key=lambda t: (state.starts[t], t))
        ],
        "free_workers": sorted(state.free_workers),
        "workers": [
            {
                "id": w.id,
                "skills": [1 if s else 0 for s in w.skills],
                "rates": list(w.rates),
            }
            for w in state.workers.values()
        ],
        "prompt": (
            prompt_payload(state.prompt, work_types) if state.prompt is not None else None
        ),
        "concession_trace": [
            {
                "prompt": prompt_payload(prompt, work_types),
                "decision": decision_payload(decision),
            }
            for prompt, decision in state.trace
        ],
        "config": config_to_doc(state.config),
        "next_seq": next_seq,
    }


__all__ = [
    "SCHEMA_VERSION",
    "DocumentError",
    "bounds_doc",
    "canonical_dumps",
    "config_from_doc",
    "config_to_doc",
    "cost_report_doc",
    "decision_from_doc",
    "doc_to_project",
    "event_to_line",
    "format_number",
    "ideal_doc",
    "load_project",
    "parse_event_line",
    "plan_to_csv",
    "plan_to_doc",
    "project_to_doc",
    "save_project",
    "session_to_doc",
    "validation_doc",
]
