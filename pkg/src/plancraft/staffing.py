"""Worker-demand arithmetic and exact minimum-cost staffing.

Every staffing question here is an exact Boolean program: pick workers so
that each demanded (task, work type) cell receives exactly its required head
count, no worker does more than one thing at a time, and only skilled workers
are eligible, minimizing total pay (rate x full task duration). The solver
reduces demands to unit slots and runs minimum-cost bipartite matching, which
is exact for this constraint structure; ties between optimal assignments are
broken toward the lexicographically smallest entry list.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .bounds import t_min_wave
from .model import (
    ZERO_TOL,
    PrecedenceSemantics,
    Project,
    Task,
    Worker,
    require_valid,
)

#: Absolute tolerance when comparing candidate costs against the optimum.
COST_TOL = 1e-9


def chi(s: float, dt: float) -> int:
    """Required worker count for work volume ``s`` within task duration ``dt``.

    Equals s/dt when s is an exact multiple of dt (judged at tolerance 1e-9
    on the quotient, so float noise like ``3 * 0.1`` still counts as exact),
    otherwise the next integer up. Zero work needs zero workers.
    """
    if dt <= 0:
        raise ValueError(f"task duration must be positive, got {dt}")
    if s < 0:
        raise ValueError(f"work volume must be non-negative, got {s}")
    if s == 0:
        return 0
    quotient = s / dt
    nearest = round(quotient)
    if abs(quotient - nearest) <= ZERO_TOL:
        return max(int(nearest), 0)
    return math.ceil(quotient)


def demands(task: Task) -> tuple[int, ...]:
    """Per-work-type worker demand vector for one task."""
    return tuple(chi(s, task.duration) for s in task.work)


def total_demand(task: Task) -> int:
    return sum(demands(task))


@dataclass(frozen=True)
class Assignment:
    """One staffing cell: a worker performing one work type within one task."""

    worker_id: str
    task_id: str
    work_index: int

    @property
    def sort_key(self) -> tuple[str, str, int]:
        return (self.worker_id, self.task_id, self.work_index)


@dataclass(frozen=True)
class Shortfall:
    """An unmet demand: a set of (task, work type) cells short of workers."""

    task_ids: tuple[str, ...]
    work_indices: tuple[int, ...]
    required: int
    available: int

    @property
    def missing(self) -> int:
        return self.required - self.available


class Outcome(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class StaffingResult:
    outcome: Outcome
    entries: tuple[Assignment, ...] = ()
    cost: float | None = None
    multiple_optima: bool = False
    shortfalls: tuple[Shortfall, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.outcome is Outcome.OPTIMAL


@dataclass(frozen=True)
class _Group:
    """One demanded (task, work type) cell and its head count."""

    task_id: str
    work_index: int
    duration: float
    count: int


def _groups_for(task: Task) -> list[_Group]:
    return [
        _Group(task.id, q, task.duration, count)
        for q, count in enumerate(demands(task))
        if count > 0
    ]


def _check_dimensions(tasks: Sequence[Task], workers: Sequence[Worker]) -> None:
    widths = {len(t.work) for t in tasks} | {len(w.skills) for w in workers}
    if len(widths) > 1:
        raise ValueError(f"inconsistent work-type vector lengths: {sorted(widths)}")


def _cost_matrix(
    slots: Sequence[_Group], workers: Sequence[Worker]
) -> np.ndarray:
    """Rows are unit slots, columns workers; forbidden cells are +inf."""
    matrix = np.full((len(slots), len(workers)), np.inf)
    for row, group in enumerate(slots):
        for col, worker in enumerate(workers):
            if worker.skills[group.work_index]:
                matrix[row, col] = worker.rates[group.work_index] * group.duration
    return matrix


def _expand(groups: Sequence[_Group]) -> list[_Group]:
    slots: list[_Group] = []
    for group in sorted(groups, key=lambda g: (g.task_id, g.work_index)):
        slots.extend([group] * group.count)
    return slots


def _match(slots: Sequence[_Group], workers: Sequence[Worker]) -> tuple[bool, float]:
    """Optimal cost of covering every slot with a distinct worker, if possible."""
    if not slots:
        return True, 0.0
    if len(slots) > len(workers):
        return False, math.inf
    matrix = _cost_matrix(slots, workers)
    try:
        rows, cols = linear_sum_assignment(matrix)
    except ValueError:
        return False, math.inf
    chosen = matrix[rows, cols]
    if not np.isfinite(chosen).all():
        return False, math.inf
    return True, float(chosen.sum())


def _solve(groups: Sequence[_Group], workers: Sequence[Worker]) -> StaffingResult:
    ordered = sorted(workers, key=lambda w: w.id)
    slots = _expand(groups)
    feasible, optimum = _match(slots, ordered)
    if not feasible:
        return StaffingResult(
            Outcome.INFEASIBLE, shortfalls=_diagnose(groups, ordered)
        )
    entries = _lex_min_entries(groups, ordered, optimum)
    multiple = _has_alternative_optimum(groups, ordered, optimum, entries)
    return StaffingResult(
        Outcome.OPTIMAL,
        entries=tuple(entries),
        cost=optimum,
        multiple_optima=multiple,
    )


def _lex_min_entries(
    groups: Sequence[_Group], ordered: Sequence[Worker], optimum: float
) -> list[Assignment]:
    """Build the lexicographically smallest optimal assignment.

    The sorted entry list is minimized position by position: for each slot we
    try candidate (worker, cell) entries in entry order and keep the first one
    that still admits a completion at the optimal cost using only workers that
    sort after the candidate (the entry list is strictly increasing in worker
    id, so later positions may only use later workers).
    """
    remaining: dict[tuple[str, int], _Group] = {
        (g.task_id, g.work_index): g for g in groups
    }
    counts: dict[tuple[str, int], int] = {
        (g.task_id, g.work_index): g.count for g in groups
    }
    entries: list[Assignment] = []
    target = optimum
    start = 0
    positions = sum(counts.values())
    for _ in range(positions):
        placed = False
        for index in range(start, len(ordered)):
            worker = ordered[index]
            for key in sorted(k for k, c in counts.items() if c > 0):
                group = remaining[key]
                if not worker.skills[group.work_index]:
                    continue
                entry_cost = worker.rates[group.work_index] * group.duration
                counts[key] -= 1
                rest = _expand(
                    [
                        _Group(g.task_id, g.work_index, g.duration, counts[(g.task_id, g.work_index)])
                        for g in groups
                        if counts[(g.task_id, g.work_index)] > 0
                    ]
                )
                ok, rest_cost = _match(rest, ordered[index + 1 :])
                if ok and abs(entry_cost + rest_cost - target) <= COST_TOL:
                    entries.append(Assignment(worker.id, group.task_id, group.work_index))
                    target -= entry_cost
                    start = index + 1
                    placed = True
                    break
                counts[key] += 1
            if placed:
                break
        if not placed:
            raise AssertionError("optimal staffing exists but greedy fixing failed")
    return entries


def _has_alternative_optimum(
    groups: Sequence[_Group],
    ordered: Sequence[Worker],
    optimum: float,
    entries: Sequence[Assignment],
) -> bool:
    """True if some other assignment achieves the optimal cost.

    Any distinct optimum must avoid at least one chosen (worker, cell) entry,
    so it suffices to re-solve with each entry forbidden in turn.
    """
    for entry in entries:
        slots: list[_Group] = []
        banned_rows: list[int] = []
        for group in sorted(groups, key=lambda g: (g.task_id, g.work_index)):
            for _ in range(group.count):
                if (
                    group.task_id == entry.task_id
                    and group.work_index == entry.work_index
                ):
                    banned_rows.append(len(slots))
                slots.append(group)
        matrix = _cost_matrix(slots, ordered)
        col = next(i for i, w in enumerate(ordered) if w.id == entry.worker_id)
        matrix[banned_rows, col] = np.inf
        try:
            rows, cols = linear_sum_assignment(matrix)
        except ValueError:
            continue
        chosen = matrix[rows, cols]
        if np.isfinite(chosen).all() and abs(float(chosen.sum()) - optimum) <= COST_TOL:
            return True
    return False


def _diagnose(groups: Sequence[_Group], workers: Sequence[Worker]) -> tuple[Shortfall, ...]:
    """Explain an infeasible instance as unmet (task, work type) demands.

    Checks single cells first, then per-task skill-overlap (Hall) sets, and
    finally reports the aggregate deficit against a maximum matching, so an
    infeasible instance always yields at least one shortfall row.
    """
    rows: list[Shortfall] = []
    for group in sorted(groups, key=lambda g: (g.task_id, g.work_index)):
        available = sum(1 for w in workers if w.skills[group.work_index])
        if available < group.count:
            rows.append(
                Shortfall((group.task_id,), (group.work_index,), group.count, available)
            )
    if rows:
        return tuple(rows)

    by_task: dict[str, list[_Group]] = {}
    for group in groups:
        by_task.setdefault(group.task_id, []).append(group)
    for task_id in sorted(by_task):
        cells = sorted(by_task[task_id], key=lambda g: g.work_index)
        if len(cells) > 16:
            continue
        worst: Shortfall | None = None
        for mask in range(1, 1 << len(cells)):
            subset = [cells[i] for i in range(len(cells)) if mask >> i & 1]
            required = sum(g.count for g in subset)
            indices = {g.work_index for g in subset}
            available = sum(1 for w in workers if any(w.skills[q] for q in indices))
            deficit = required - available
            if deficit > 0 and (worst is None or deficit > worst.missing):
                worst = Shortfall(
                    (task_id,),
                    tuple(g.work_index for g in subset),
                    required,
                    available,
                )
        if worst is not None:
            rows.append(worst)
    if rows:
        return tuple(rows)

    slots = _expand(groups)
    adjacency = np.zeros((len(slots), len(workers)), dtype=np.int8)
    for row, group in enumerate(slots):
        for col, worker in enumerate(workers):
            if worker.skills[group.work_index]:
                adjacency[row, col] = 1
    matched = maximum_bipartite_matching(csr_matrix(adjacency), perm_type="column")
    available = int((matched != -1).sum())
    return (
        Shortfall(
            tuple(sorted({g.task_id for g in groups})),
            tuple(sorted({g.work_index for g in groups})),
            len(slots),
            available,
        ),
    )


def solve_task_staffing(task: Task, workers: Sequence[Worker]) -> StaffingResult:
    """Exact minimum-cost crew for one task against the given worker pool."""
    _check_dimensions([task], workers)
    return _solve(_groups_for(task), workers)


def solve_joint_staffing(
    ready_tasks: Sequence[Task], free_workers: Sequence[Worker]
) -> StaffingResult:
    """Exact minimum-cost simultaneous staffing of several tasks.

    All ready tasks draw on one shared pool, each worker serving at most one
    (task, work type) cell, so the joint optimum is never cheaper than the
    sum of the tasks' individual optima.
    """
    _check_dimensions(ready_tasks, free_workers)
    groups: list[_Group] = []
    for task in ready_tasks:
        groups.extend(_groups_for(task))
    return _solve(groups, free_workers)


@dataclass(frozen=True)
class ProjectCost:
    """Per-task staffing minima against the full pool, or what blocks them."""

    feasible: bool
    total: float | None
    per_task: Mapping[str, float] = field(default_factory=dict)
    failures: tuple[Shortfall, ...] = ()


def c_min_project(project: Project) -> ProjectCost:
    """Minimum project cost: each task staffed independently at full pool.

    Infeasibility never raises; the result names every failing task with its
    unmet (work type, shortfall) details.
    """
    require_valid(project)
    per_task: dict[str, float] = {}
    failures: list[Shortfall] = []
    for task in project.tasks:
        result = solve_task_staffing(task, project.workers)
        if result.feasible:
            per_task[task.id] = float(result.cost or 0.0)
        else:
            failures.extend(result.shortfalls)
    if failures:
        return ProjectCost(False, None, per_task, tuple(failures))
    return ProjectCost(True, float(sum(per_task.values())), per_task)


class StaffingInfeasibleError(RuntimeError):
    """Raised where a computation needs feasible staffing but none exists."""

    def __init__(self, report: ProjectCost) -> None:
        self.report = report
        names = ", ".join(sorted({t for s in report.failures for t in s.task_ids}))
        super().__init__(f"staffing infeasible for tasks: {names}")


@dataclass(frozen=True)
class IdealPoint:
    """Duration and cost minima computed independently; jointly often unattainable."""

    t_star: float
    c_star: float


def ideal_point(
    project: Project,
    semantics: PrecedenceSemantics = PrecedenceSemantics.FINISH_TO_START,
) -> IdealPoint:
    """The reference point (minimum duration, minimum cost) for a project."""
    require_valid(project)
    cost = c_min_project(project)
    if not cost.feasible:
        raise StaffingInfeasibleError(cost)
    schedule = t_min_wave(project, semantics)
    return IdealPoint(schedule.total_duration, float(cost.total or 0.0))


__all__ = [
    "Assignment",
    "COST_TOL",
    "IdealPoint",
    "Outcome",
    "ProjectCost",
    "Shortfall",
    "StaffingInfeasibleError",
    "StaffingResult",
    "c_min_project",
    "chi",
    "demands",
    "ideal_point",
    "solve_joint_staffing",
    "solve_task_staffing",
    "total_demand",
]
