"""Project duration bounds: serial upper bound and the iterative wave lower bound."""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ZERO_TOL,
    PrecedenceSemantics,
    Project,
    require_valid,
)


class SchedulingInvariantError(RuntimeError):
    """No task was ready at a wave boundary although tasks remain."""


@dataclass(frozen=True)
class WaveEntry:
    """A task inside a wave: all wave members start when the wave opens."""

    task_id: str
    start_offset: float
    completion_time: float


@dataclass(frozen=True)
class Wave:
    start_time: float
    entries: tuple[WaveEntry, ...]


@dataclass(frozen=True)
class WaveSchedule:
    waves: tuple[Wave, ...]
    total_duration: float
    #: Time deltas of each inner clock advance, in order (their sum is total_duration).
    advances: tuple[float, ...] = ()

    def wave_of(self, task_id: str) -> int:
        for index, wave in enumerate(self.waves):
            if any(entry.task_id == task_id for entry in wave.entries):
                return index
        raise KeyError(task_id)


@dataclass(frozen=True)
class DurationRange:
    t_min: float
    t_max: float


def t_max(project: Project) -> float:
    """Serial upper bound: the sum of all task durations."""
    require_valid(project)
    return float(sum(task.duration for task in project.tasks))


def t_min_wave(
    project: Project,
    semantics: PrecedenceSemantics = PrecedenceSemantics.FINISH_TO_START,
) -> WaveSchedule:
    """Lower duration bound by the iterative wave rule, assuming ample workers.

    Ready tasks are admitted together as a wave; the clock then repeatedly
    advances by the smallest remaining duration in the wave, completing tasks
    as their remainder reaches zero (tolerance 1e-9). The next wave opens only
    once the current wave has fully drained, so the bound can exceed the
    critical-path length on some DAGs (see ``critical_path``).
    """
    require_valid(project)
    clock = 0.0
    completed: set[str] = set()
    started: set[str] = set()
    pending: dict[str, float] = {task.id: task.duration for task in project.tasks}
    waves: list[Wave] = []
    advances: list[float] = []

    while pending:
        ready = [tid for tid in sorted(pending) if _is_ready(project, tid, completed, started, semantics)]
        if not ready:
            raise SchedulingInvariantError(
                "no ready task at wave boundary; project dependencies are inconsistent"
            )
        wave_start = clock
        active = {tid: pending.pop(tid) for tid in ready}
        started.update(ready)
        entries: list[WaveEntry] = []
        while active:
            dt_min = min(active.values())
            clock += dt_min
            advances.append(dt_min)
            for tid in list(active):
                active[tid] -= dt_min
            for tid in sorted(tid for tid, rem in active.items() if rem <= ZERO_TOL):
                entries.append(WaveEntry(tid, 0.0, clock))
                completed.add(tid)
                del active[tid]
        waves.append(Wave(wave_start, tuple(entries)))

    return WaveSchedule(tuple(waves), clock, tuple(advances))


def _is_ready(
    project: Project,
    task_id: str,
    completed: set[str],
    started: set[str],
    semantics: PrecedenceSemantics,
) -> bool:
    preds = project.task_map[task_id].predecessors
    if semantics is PrecedenceSemantics.FINISH_TO_START:
        return preds <= completed
    return preds <= (completed | started)


def duration_range(
    project: Project,
    semantics: PrecedenceSemantics = PrecedenceSemantics.FINISH_TO_START,
) -> DurationRange:
    """The feasible duration window [t_min, t_max] for the project."""
    return DurationRange(t_min_wave(project, semantics).total_duration, t_max(project))


def critical_path(project: Project) -> tuple[float, tuple[str, ...]]:
    """Longest dependency path by total duration (diagnostic, not the bound).

    Ties prefer the lexicographically smallest path.
    """
    require_valid(project)
    order = _topological_order(project)
    best_len: dict[str, float] = {}
    best_pred: dict[str, str | None] = {}
    for tid in order:
        task = project.task_map[tid]
        length: float = task.duration
        pred: str | None = None
        for p in sorted(task.predecessors):
            candidate = best_len[p] + task.duration
            if candidate > length or (candidate == length and pred is not None and p < pred):
                length, pred = candidate, p
        best_len[tid] = length
        best_pred[tid] = pred

    end = max(sorted(best_len), key=lambda tid: best_len[tid])
    path: list[str] = []
    cursor: str | None = end
    while cursor is not None:
        path.append(cursor)
        cursor = best_pred[cursor]
    path.reverse()
    return best_len[end], tuple(path)


def _topological_order(project: Project) -> list[str]:
    indegree = {task.id: len(task.predecessors) for task in project.tasks}
    dependents: dict[str, list[str]] = {task.id: [] for task in project.tasks}
    for task in project.tasks:
        for pred in task.predecessors:
            dependents[pred].append(task.id)
    ready = sorted(tid for tid, deg in indegree.items() if deg == 0)
    order: list[str] = []
    while ready:
        tid = ready.pop(0)
        order.append(tid)
        for nxt in sorted(dependents[tid]):
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
        ready.sort()
    return order


__all__ = [
    "DurationRange",
    "SchedulingInvariantError",
    "Wave",
    "WaveEntry",
    "WaveSchedule",
    "critical_path",
    "duration_range",
    "t_max",
    "t_min_wave",
]
