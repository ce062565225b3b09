"""Sizing up a project before planning: duration range and the ideal point.

A project is a DAG of tasks, each carrying per-work-type volumes, plus a pool
of workers with skill masks and hourly rates. Before building any schedule we
can ask two independent questions: how fast could the project possibly go
(with ample staffing), and how cheap could it possibly be (with unlimited
time)? Together those answers form the ideal point that the interactive
planner later tries to approach.

Run: python demos/01_bounds_and_ideal_point.py
"""

from plancraft import (
    Project,
    Task,
    Worker,
    c_min_project,
    classify_topology,
    critical_path,
    duration_range,
    ideal_point,
    t_min_wave,
    validate_project,
)

# A small build project: spec -> {code, docs} -> release.
project = Project(
    work_types=["design", "build"],
    resource_types=["lab-hours"],
    tasks=[
        Task("spec", predecessors=[], work=[2.0, 0.0], resources=[4], duration=2.0),
        Task("code", predecessors=["spec"], work=[0.0, 6.0], resources=[0], duration=3.0),
        Task("docs", predecessors=["spec"], work=[1.0, 1.0], resources=[0], duration=1.0),
        Task("ship", predecessors=["code", "docs"], work=[0.0, 1.0], resources=[2], duration=1.0),
    ],
    workers=[
        Worker("ada", skills=[1, 1], rates=[30.0, 40.0]),
        Worker("bo", skills=[0, 1], rates=[0.0, 25.0]),
        Worker("cy", skills=[1, 0], rates=[20.0, 0.0]),
    ],
)

report = validate_project(project)
print("valid:", report.is_valid)
print("topology:", classify_topology(project).value)

# The duration window: waves of simultaneously runnable tasks give the lower
# bound, plain serialization the upper bound.
window = duration_range(project)
print(f"duration range: [{window.t_min}, {window.t_max}]")

schedule = t_min_wave(project)
for index, wave in enumerate(schedule.waves):
    members = ", ".join(e.task_id for e in wave.entries)
    print(f"  wave {index}: starts at {wave.start_time}, tasks: {members}")

# The wave rule drains each wave fully before opening the next, so its bound
# can sit above the classic critical path; both numbers are worth seeing.
length, path = critical_path(project)
print(f"critical path: {' -> '.join(path)} (length {length})")

# Cheapest possible staffing, task by task, against the full pool.
costs = c_min_project(project)
print("per-task minima:", dict(sorted(costs.per_task.items())))
print("minimum total cost:", costs.total)

point = ideal_point(project)
print(f"ideal point: T*={point.t_star}, C*={point.c_star}")
