"""Batch planning with scripted policies, and the document formats.

Policies answer prompts without a human: always-accept chases the deadline,
a budget cap trades time to stay under a spending limit. Projects and plans
round-trip through canonical JSON (sorted keys, fixed 9-decimal numbers), so
equal values always produce identical bytes.

Run: python demos/03_policies_and_documents.py
"""

from plancraft import (
    AlwaysAccept,
    BudgetCap,
    Project,
    Task,
    Worker,
    run_to_completion,
)
from plancraft.documents import (
    canonical_dumps,
    load_project,
    plan_to_csv,
    plan_to_doc,
    save_project,
)

project = Project(
    work_types=["S1"],
    tasks=[
        Task("north", [], [4.0], [], 4.0),
        Task("south", [], [4.0], [], 4.0),
    ],
    workers=[Worker("cheap", [1], [1.0]), Worker("dear", [1], [10.0])],
)

# Same project, two temperaments.
fast = run_to_completion(project, AlwaysAccept())
thrifty = run_to_completion(project, BudgetCap(20.0))
print(f"always-accept: T={fast.plan.total_duration}, C={fast.plan.total_cost}, "
      f"concessions={len(fast.plan.trace)}")
print(f"budget cap 20: T={thrifty.plan.total_duration}, C={thrifty.plan.total_cost}, "
      f"concessions={len(thrifty.plan.trace)}")

# Canonical project documents: save -> load -> save is byte-stable.
blob = save_project(project)
assert save_project(load_project(blob)) == blob
print("\nproject document:")
print(blob.decode("utf-8"))

# Plans export as a structured document and as a flat schedule table.
doc = plan_to_doc(thrifty.plan, project)
print("plan document (abridged):")
print(canonical_dumps({k: doc[k] for k in ("total_duration", "total_cost", "hierarchy")}))
print("\nschedule table:")
print(plan_to_csv(thrifty.plan, project))
