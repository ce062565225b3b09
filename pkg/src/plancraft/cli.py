"""Command-line interface: validate, bounds, ideal, plan, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import documents, engine, policy as policy_mod
from .documents import DocumentError, canonical_dumps, format_number
from .model import PrecedenceSemantics, validate_project
from .staffing import c_min_project

DEFAULT_PORT = 8471

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plancraft")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a project document")
    p_validate.add_argument("file", type=Path)

    p_bounds = sub.add_parser("bounds", help="duration range and critical path")
    p_bounds.add_argument("file", type=Path)
    p_bounds.add_argument(
        "--semantics", choices=["finish", "start"], default="finish"
    )

    p_ideal = sub.add_parser("ideal", help="ideal point (minimum duration and cost)")
    p_ideal.add_argument("file", type=Path)
    p_ideal.add_argument(
        "--semantics", choices=["finish", "start"], default="finish"
    )

    p_plan = sub.add_parser("plan", help="build a plan with a scripted policy")
    p_plan.add_argument("file", type=Path)
    p_plan.add_argument("--policy", required=True)
    p_plan.add_argument("--trace", type=Path, help="write the full plan document here")
    p_plan.add_argument("--schedule-csv", type=Path, help="write the flat schedule here")
    p_plan.add_argument(
        "--semantics", choices=["finish", "start"], default="start"
    )

    p_serve = sub.add_parser("serve", help="run the session service")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--data-dir", type=Path, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE

    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "ideal":
            return _cmd_ideal(args)
        if args.command == "plan":
            return _cmd_plan(args)
        return _cmd_serve(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def entry() -> None:  # pragma: no cover
    raise SystemExit(main())


def _load(path: Path):
    return documents.load_project(path.read_bytes())


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        project = _load(args.file)
    except DocumentError as exc:
        if exc.report is not None:
            for violation in exc.report.violations:
                print(f"{violation.kind.value}: {violation.subject}: {violation.message}")
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    report = validate_project(project)
    print(f"valid: {len(project.tasks)} tasks, {len(project.workers)} workers")
    return EXIT_OK if report.is_valid else EXIT_DOMAIN


def _cmd_bounds(args: argparse.Namespace) -> int:
    project = _load(args.file)
    doc = documents.bounds_doc(project, PrecedenceSemantics(args.semantics))
    print(f"t_min={format_number(doc['t_min'])}")
    print(f"t_max={format_number(doc['t_max'])}")
    print(f"critical_path_length={format_number(doc['critical_path_length'])}")
    print("critical_path=" + "->".join(doc["critical_path"]))
    return EXIT_OK


def _cmd_ideal(args: argparse.Namespace) -> int:
    project = _load(args.file)
    report = c_min_project(project)
    if not report.feasible:
        doc = documents.cost_report_doc(report, project.work_types)
        print("staffing infeasible", file=sys.stderr)
        for row in doc["failures"]:
            print(
                f"  tasks={','.join(row['tasks'])} work_types={','.join(row['work_types'])}"
                f" required={row['required']} available={row['available']}",
                file=sys.stderr,
            )
        return EXIT_DOMAIN
    doc = documents.ideal_doc(project, PrecedenceSemantics(args.semantics))
    print(f"t_star={format_number(doc['t_star'])}")
    print(f"c_star={format_number(doc['c_star'])}")
    return EXIT_OK


def _make_stdin_handler(work_types: tuple[str, ...]):
    """Dialog mode on stdio: show each prompt, read one JSON decision per line."""

    def handler(
        prompt: engine.DecisionPrompt, summary: engine.StateSummary
    ) -> engine.Decision | None:
        doc = engine.prompt_payload(prompt, work_types)
        print(canonical_dumps({"prompt": doc, "clock": summary.clock}), flush=True)
        line = sys.stdin.readline()
        if not line.strip():
            return None
        try:
            return documents.decision_from_doc(json.loads(line))
        except (DocumentError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return None

    return handler


def _cmd_plan(args: argparse.Namespace) -> int:
    project = _load(args.file)
    try:
        policy = policy_mod.parse_policy(
            args.policy, _make_stdin_handler(project.work_types)
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    config = engine.SessionConfig(semantics=PrecedenceSemantics(args.semantics))
    result = engine.run_to_completion(project, policy, config)
    if not result.completed:
        assert result.stalemate is not None
        print(f"stalemate: {result.stalemate.reason}", file=sys.stderr)
        if result.stalemate.prompt is not None:
            doc = engine.prompt_payload(result.stalemate.prompt, project.work_types)
            print(canonical_dumps(doc), file=sys.stderr)
        return EXIT_DOMAIN
    plan = result.plan
    assert plan is not None
    print(f"total_duration={format_number(plan.total_duration)}")
    print(f"total_cost={format_number(plan.total_cost)}")
    print("ordering=" + "->".join(plan.hierarchy.ordering))
    print(f"concessions={len(plan.trace)}")
    plan_doc = documents.plan_to_doc(plan, project)
    if args.trace is not None:
        args.trace.write_text(canonical_dumps(plan_doc) + "\n", encoding="utf-8")
    if args.schedule_csv is not None:
        args.schedule_csv.write_text(
            documents.plan_to_csv(plan, project), encoding="utf-8"
        )
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    port = args.port
    if port is None:
        port = int(os.environ.get("PLANCRAFT_PORT", DEFAULT_PORT))
    data_dir = args.data_dir
    if data_dir is None:
        env_dir = os.environ.get("PLANCRAFT_DATA_DIR")
        data_dir = Path(env_dir) if env_dir else None
    app = create_app(data_dir)
    uvicorn.run(app, host="127.0.0.1", port=port)
    return EXIT_OK


__all__ = ["build_parser", "entry", "main"]


if __name__ == "__main__":  # pragma: no cover
    entry()
