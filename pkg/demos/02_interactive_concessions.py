"""Walking through a concessions session by hand.

When several tasks become ready at once they compete for the same workers.
The engine surfaces two kinds of decision points: Case 1, the free workers
cannot cover the ready demands at all, and Case 2, they can but only above
the sum of the tasks' individual minima. This demo drives one session of
each kind, previewing every option with a dry run before committing.

Run: python demos/02_interactive_concessions.py
"""

from plancraft import (
    AcceptCost,
    AddWorkers,
    DeferTasks,
    Phase,
    Project,
    Task,
    Worker,
    apply_decision,
    dry_run,
    start_session,
    step,
)

# --- Case 2: a cost overrun ------------------------------------------------
# Two identical tasks, one cheap worker and one expensive one. Running both
# tasks in parallel forces the expensive worker onto one of them.
parallel = Project(
    work_types=["S1"],
    tasks=[
        Task("north", [], [4.0], [], 4.0),
        Task("south", [], [4.0], [], 4.0),
    ],
    workers=[Worker("cheap", [1], [1.0]), Worker("dear", [1], [10.0])],
)

state = start_session(parallel)
step(state)
prompt = state.prompt
print("case:", prompt.case.value)
print(f"proposed C*={prompt.proposed_cost}, baseline={prompt.baseline_cost}, "
      f"overrun={prompt.overrun}")

for label, decision in [
    ("accept the overrun", AcceptCost()),
    ("defer 'south'", DeferTasks(["south"])),
]:
    projection = dry_run(state, decision)
    print(f"  if we {label}: T+={projection.projected_t_delta}, "
          f"C+={projection.projected_c_delta}")

# Deferring trades money for time; here we keep the money.
apply_decision(state, DeferTasks(["south"]))
while state.phase is Phase.ADVANCING:
    step(state)
print(f"finished: T={state.plan.total_duration}, C={state.plan.total_cost}")
print()

# --- Case 1: not enough hands ----------------------------------------------
# Both tasks need two riggers simultaneously but only three exist.
crewed = Project(
    work_types=["rigging"],
    tasks=[
        Task("stage", [], [4.0], [], 2.0),
        Task("lights", [], [4.0], [], 2.0),
    ],
    workers=[Worker(f"r{j}", [1], [2.0]) for j in range(1, 4)],
)

state = start_session(crewed)
step(state)
prompt = state.prompt
print("case:", prompt.case.value)
for row in prompt.shortfalls:
    print(f"  short {row.missing} worker(s) for tasks {row.task_ids}: "
          f"required {row.required}, available {row.available}")
print(f"  any deferral delays the project by at least {prompt.defer_delay_bound}")

# Hiring one more rigger resolves the wave outright.
apply_decision(state, AddWorkers([Worker("r4", [1], [2.0])]))
while state.phase is Phase.ADVANCING:
    step(state)
print(f"finished with the extra hire: T={state.plan.total_duration}, "
      f"C={state.plan.total_cost}")

# The whole dialog is audit-ready: every prompt/decision pair is on record.
for recorded_prompt, decision in state.trace:
    print("  trace:", recorded_prompt.case.value, "->", type(decision).__name__)
