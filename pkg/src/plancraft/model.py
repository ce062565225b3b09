"""Domain model: projects, tasks, workers, hierarchies, and topology classification."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

#: Absolute tolerance for comparisons against zero throughout the package.
ZERO_TOL = 1e-9


class UnknownTaskError(ValueError):
    """An ordering or decision referenced a task id not present in the project."""


class PrecedenceSemantics(Enum):
    """When a task becomes ready relative to its predecessors.

    FINISH_TO_START admits a task once every predecessor has completed;
    START_TO_START admits it once every predecessor has at least started.
    """

    FINISH_TO_START = "finish"
    START_TO_START = "start"


class Topology(Enum):
    STAR = "star"
    STRAIGHT_LINE = "straight-line"
    TREE = "tree"
    GENERAL = "general"


@dataclass(frozen=True)
class Task:
    """One unit of project work.

    ``work[q]`` is the volume of work type ``q`` in worker-time units,
    ``resources[k]`` the required amount of resource type ``k`` (carried as
    data, never optimized), ``duration`` the wall-clock time the task takes.
    ``declared_cost`` is optional metadata; all computed costs derive from
    worker rates.
    """

    id: str
    predecessors: frozenset[str]
    work: tuple[float, ...]
    resources: tuple[int, ...]
    duration: float
    declared_cost: float | None = None

    def __init__(
        self,
        id: str,
        predecessors: Iterable[str] = (),
        work: Iterable[float] = (),
        resources: Iterable[int] = (),
        duration: float = 1.0,
        declared_cost: float | None = None,
    ) -> None:
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "predecessors", frozenset(str(p) for p in predecessors))
        object.__setattr__(self, "work", tuple(float(s) for s in work))
        object.__setattr__(self, "resources", tuple(int(r) for r in resources))
        object.__setattr__(self, "duration", float(duration))
        object.__setattr__(
            self, "declared_cost", None if declared_cost is None else float(declared_cost)
        )


@dataclass(frozen=True)
class Worker:
    """A performer with a Boolean skill mask and per-unit-time rates per work type."""

    id: str
    skills: tuple[bool, ...]
    rates: tuple[float, ...]

    def __init__(
        self,
        id: str,
        skills: Iterable[bool | int] = (),
        rates: Iterable[float] = (),
    ) -> None:
        object.__setattr__(self, "id", str(id))
        object.__setattr__(self, "skills", tuple(bool(w) for w in skills))
        object.__setattr__(self, "rates", tuple(float(c) for c in rates))


@dataclass(frozen=True)
class Project:
    """A project instance: work/resource type vectors, tasks, workers, limits."""

    work_types: tuple[str, ...]
    resource_types: tuple[str, ...]
    tasks: tuple[Task, ...]
    workers: tuple[Worker, ...]
    budget: float | None = None
    deadline: float | None = None

    def __init__(
        self,
        work_types: Iterable[str],
        resource_types: Iterable[str] = (),
        tasks: Iterable[Task] = (),
        workers: Iterable[Worker] = (),
        budget: float | None = None,
        deadline: float | None = None,
    ) -> None:
        object.__setattr__(self, "work_types", tuple(str(s) for s in work_types))
        object.__setattr__(self, "resource_types", tuple(str(r) for r in resource_types))
        object.__setattr__(self, "tasks", tuple(tasks))
        object.__setattr__(self, "workers", tuple(workers))
        object.__setattr__(self, "budget", None if budget is None else float(budget))
        object.__setattr__(self, "deadline", None if deadline is None else float(deadline))

    @cached_property
    def task_map(self) -> dict[str, Task]:
        return {task.id: task for task in self.tasks}

    @cached_property
    def worker_map(self) -> dict[str, Worker]:
        return {worker.id: worker for worker in self.workers}

    @property
    def num_work_types(self) -> int:
        return len(self.work_types)


@dataclass(frozen=True)
class Hierarchy:
    """An ordering of all tasks in which predecessors come first."""

    ordering: tuple[str, ...]

    def __init__(self, ordering: Iterable[str]) -> None:
        object.__setattr__(self, "ordering", tuple(str(t) for t in ordering))


class ViolationKind(Enum):
    DUPLICATE_ID = "duplicate-id"
    DANGLING_PREDECESSOR = "dangling-predecessor"
    DEPENDENCY_CYCLE = "dependency-cycle"
    DIMENSION_MISMATCH = "dimension-mismatch"
    NON_POSITIVE_DURATION = "non-positive-duration"
    NEGATIVE_VALUE = "negative-value"
    EMPTY_PROJECT = "empty-project"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}


class ProjectValidationError(ValueError):
    """Raised by operations that require a valid project."""

    def __init__(self, report: ValidationReport) -> None:
        self.report = report
        details = "; ".join(f"{v.subject}: {v.message}" for v in report.violations)
        super().__init__(f"project failed validation: {details}")


def validate_project(project: Project) -> ValidationReport:
    """Check structural invariants; returns a report instead of raising.

    A project is valid iff the returned report carries no violations:
    unique ids, resolvable acyclic predecessors, consistent vector lengths,
    positive durations, and non-negative numeric data.
    """
    violations: list[Violation] = []
    q = project.num_work_types
    k = len(project.resource_types)

    if not project.tasks:
        violations.append(
            Violation(ViolationKind.EMPTY_PROJECT, "project", "project has no tasks")
        )
    if q == 0:
        violations.append(
            Violation(ViolationKind.EMPTY_PROJECT, "project", "project declares no work types")
        )
    if project.budget is not None and project.budget < -ZERO_TOL:
        violations.append(
            Violation(ViolationKind.NEGATIVE_VALUE, "project", "budget is negative")
        )
    if project.deadline is not None and project.deadline <= ZERO_TOL:
        violations.append(
            Violation(ViolationKind.NEGATIVE_VALUE, "project", "deadline is not positive")
        )

    seen_tasks: set[str] = set()
    for task in project.tasks:
        if task.id in seen_tasks:
            violations.append(
                Violation(ViolationKind.DUPLICATE_ID, task.id, "duplicate task id")
            )
        seen_tasks.add(task.id)

    seen_workers: set[str] = set()
    for worker in project.workers:
        if worker.id in seen_workers:
            violations.append(
                Violation(ViolationKind.DUPLICATE_ID, worker.id, "duplicate worker id")
            )
        seen_workers.add(worker.id)
        if len(worker.skills) != q or len(worker.rates) != q:
            violations.append(
                Violation(
                    ViolationKind.DIMENSION_MISMATCH,
                    worker.id,
                    f"skills/rates length must be {q}, got "
                    f"{len(worker.skills)}/{len(worker.rates)}",
                )
            )
        if any(rate < -ZERO_TOL for rate in worker.rates):
            violations.append(
                Violation(ViolationKind.NEGATIVE_VALUE, worker.id, "negative rate")
            )

    task_ids = {task.id for task in project.tasks}
    for task in project.tasks:
        if len(task.work) != q:
            violations.append(
                Violation(
                    ViolationKind.DIMENSION_MISMATCH,
                    task.id,
                    f"work vector length must be {q}, got {len(task.work)}",
                )
            )
        if len(task.resources) != k:
            violations.append(
                Violation(
                    ViolationKind.DIMENSION_MISMATCH,
                    task.id,
                    f"resources vector length must be {k}, got {len(task.resources)}",
                )
            )
        if task.duration <= ZERO_TOL:
            violations.append(
                Violation(
                    ViolationKind.NON_POSITIVE_DURATION,
                    task.id,
                    f"duration must be positive, got {task.duration}",
                )
            )
        if any(s < -ZERO_TOL for s in task.work):
            violations.append(
                Violation(ViolationKind.NEGATIVE_VALUE, task.id, "negative work volume")
            )
        if any(r < 0 for r in task.resources):
            violations.append(
                Violation(ViolationKind.NEGATIVE_VALUE, task.id, "negative resource amount")
            )
        if task.declared_cost is not None and task.declared_cost < -ZERO_TOL:
            violations.append(
                Violation(ViolationKind.NEGATIVE_VALUE, task.id, "negative declared cost")
            )
        for pred in sorted(task.predecessors):
            if pred == task.id:
                violations.append(
                    Violation(
                        ViolationKind.DEPENDENCY_CYCLE, task.id, "task depends on itself"
                    )
                )
            elif pred not in task_ids:
                violations.append(
                    Violation(
                        ViolationKind.DANGLING_PREDECESSOR,
                        task.id,
                        f"unknown predecessor {pred!r}",
                    )
                )

    cycle = _find_cycle(project, task_ids)
    if cycle:
        violations.append(
            Violation(
                ViolationKind.DEPENDENCY_CYCLE,
                cycle[0],
                "dependency cycle: " + " -> ".join(cycle + [cycle[0]]),
            )
        )

    return ValidationReport(tuple(violations))


def _find_cycle(project: Project, task_ids: set[str]) -> list[str]:
    """Return one dependency cycle as a node list, or [] if the graph is a DAG."""
    edges: dict[str, list[str]] = {
        task.id: sorted(p for p in task.predecessors if p in task_ids and p != task.id)
        for task in project.tasks
    }
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {tid: WHITE for tid in edges}
    stack: list[str] = []

    def visit(node: str) -> list[str]:
        color[node] = GRAY
        stack.append(node)
        for nxt in edges[node]:
            if color[nxt] == GRAY:
                return stack[stack.index(nxt) :]
            if color[nxt] == WHITE:
                found = visit(nxt)
                if found:
                    return found
        stack.pop()
        color[node] = BLACK
        return []

    for tid in sorted(edges):
        if color[tid] == WHITE:
            found = visit(tid)
            if found:
                return found
    return []


def require_valid(project: Project) -> Project:
    """Raise ProjectValidationError unless the project validates cleanly."""
    report = validate_project(project)
    if not report.is_valid:
        raise ProjectValidationError(report)
    return project


def is_valid_hierarchy(ordering: Hierarchy | Sequence[str], project: Project) -> bool:
    """True iff the ordering covers every task once with predecessors first."""
    ids = ordering.ordering if isinstance(ordering, Hierarchy) else tuple(ordering)
    task_ids = set(project.task_map)
    for tid in ids:
        if tid not in task_ids:
            raise UnknownTaskError(f"ordering references unknown task {tid!r}")
    if len(ids) != len(task_ids) or len(set(ids)) != len(ids):
        return False
    seen: set[str] = set()
    for tid in ids:
        if not project.task_map[tid].predecessors <= seen:
            return False
        seen.add(tid)
    return True


def classify_topology(project: Project) -> Topology:
    """Classify the dependency shape; most specific kind wins.

    Precedence is StraightLine > Star > Tree > General, so a two-node chain
    classifies as StraightLine even though it also matches the star pattern.
    """
    tasks = project.tasks
    roots = [t.id for t in tasks if not t.predecessors]
    successors: dict[str, int] = {t.id: 0 for t in tasks}
    for task in tasks:
        for pred in task.predecessors:
            successors[pred] += 1

    is_tree = len(roots) == 1 and all(
        len(t.predecessors) == 1 for t in tasks if t.id != roots[0]
    )
    if is_tree and all(count <= 1 for count in successors.values()):
        return Topology.STRAIGHT_LINE
    if len(roots) == 1 and all(
        t.predecessors == frozenset({roots[0]}) for t in tasks if t.id != roots[0]
    ):
        return Topology.STAR
    if is_tree:
        return Topology.TREE
    return Topology.GENERAL


__all__ = [
    "ZERO_TOL",
    "Hierarchy",
    "PrecedenceSemantics",
    "Project",
    "ProjectValidationError",
    "Task",
    "Topology",
    "UnknownTaskError",
    "ValidationReport",
    "Violation",
    "ViolationKind",
    "Worker",
    "classify_topology",
    "is_valid_hierarchy",
    "require_valid",
    "validate_project",
]
