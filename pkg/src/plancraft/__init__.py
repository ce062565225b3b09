"""Task-hierarchy planning for skilled-worker projects.

The pipeline: model a project as a task DAG with work-type volumes and a
pool of skilled workers, compute its duration range and minimum staffing
cost (the ideal point), then build an executable task hierarchy through an
interactive sequence of staffing waves where every infeasibility or cost
overrun becomes an explicit decision for a human planner or scripted policy.
"""

from .bounds import (
    DurationRange,
    WaveSchedule,
    critical_path,
    duration_range,
    t_max,
    t_min_wave,
)
from .engine import (
    AcceptCost,
    AddWorkers,
    CaseKind,
    Decision,
    DecisionPrompt,
    DeferTasks,
    Phase,
    Plan,
    ProtocolError,
    RunResult,
    SessionConfig,
    SessionState,
    apply_decision,
    dry_run,
    replay_decisions,
    run_to_completion,
    start_session,
    step,
)
from .model import (
    Hierarchy,
    PrecedenceSemantics,
    Project,
    ProjectValidationError,
    Task,
    Topology,
    ValidationReport,
    Worker,
    classify_topology,
    is_valid_hierarchy,
    validate_project,
)
from .policy import ABSTAIN, AlwaysAccept, BudgetCap, DeadlineCap, External, parse_policy
from .staffing import (
    Assignment,
    IdealPoint,
    ProjectCost,
    StaffingResult,
    c_min_project,
    chi,
    demands,
    ideal_point,
    solve_joint_staffing,
    solve_task_staffing,
)

__version__ = "0.1.0"

__all__ = [
    "ABSTAIN",
    "AcceptCost",
    "AddWorkers",
    "AlwaysAccept",
    "Assignment",
    "BudgetCap",
    "CaseKind",
    "DeadlineCap",
    "Decision",
    "DecisionPrompt",
    "DeferTasks",
    "DurationRange",
    "WaveSchedule",
    "External",
    "Hierarchy",
    "IdealPoint",
    "Phase",
    "Plan",
    "PrecedenceSemantics",
    "Project",
    "ProjectCost",
    "ProjectValidationError",
    "ProtocolError",
    "RunResult",
    "SessionConfig",
    "SessionState",
    "StaffingResult",
    "Task",
    "Topology",
    "ValidationReport",
    "Worker",
    "apply_decision",
    "c_min_project",
    "chi",
    "classify_topology",
    "critical_path",
    "demands",
    "dry_run",
    "duration_range",
    "ideal_point",
    "is_valid_hierarchy",
    "parse_policy",
    "replay_decisions",
    "run_to_completion",
    "solve_joint_staffing",
    "solve_task_staffing",
    "start_session",
    "step",
    "t_max",
    "t_min_wave",
    "validate_project",
]
