"""Web service exposing projects and concession sessions over the wire API.

Sessions are event-sourced: the per-session log (one canonical JSON line per
engine event) is the source of truth, and a restarted service rebuilds every
session by replaying its recorded decisions through a fresh engine run.
Decision posts carry a client sequence number so each decision applies
exactly once; stale or duplicate posts are rejected with 409.
"""

from __future__ import annotations

import logging
import os
import threading
import uuid
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware

from . import documents, engine
from .documents import DocumentError, canonical_dumps
from .engine import Phase, ProtocolError, SessionConfig
from .model import Project

logger = logging.getLogger(__name__)


def _new_id(prefix: str) -> str:
    return f"{prefix}-{uuid.uuid4().hex[:12]}"


class _SessionRuntime:
    """One live session: engine state plus its single-writer lock."""

    def __init__(
        self,
        session_id: str,
        project_id: str,
        project: Project,
        config: SessionConfig,
        state: engine.SessionState,
    ) -> None:
        self.id = session_id
        self.project_id = project_id
        self.project = project
        self.config = config
        self.state = state
        self.lock = threading.RLock()
        self.next_seq = 1
        self.persisted_events = 0


class ServiceStore:
    """Projects and sessions, optionally persisted under a data directory."""

    def __init__(self, data_dir: Path | None = None) -> None:
        self.data_dir = data_dir
        self.projects: dict[str, Project] = {}
        self.sessions: dict[str, _SessionRuntime] = {}
        self._create_lock = threading.Lock()
        if data_dir is not None:
            (data_dir / "projects").mkdir(parents=True, exist_ok=True)
            (data_dir / "sessions").mkdir(parents=True, exist_ok=True)
            self._load()

    def add_project(self, project: Project) -> str:
        with self._create_lock:
            project_id = _new_id("p")
            self.projects[project_id] = project
        if self.data_dir is not None:
            path = self.data_dir / "projects" / f"{project_id}.json"
            path.write_bytes(documents.save_project(project))
        return project_id

    def create_session(self, project_id: str, config: SessionConfig) -> _SessionRuntime:
        project = self.projects[project_id]
        state = engine.start_session(project, config)
        _auto_advance(state)
        with self._create_lock:
            session_id = _new_id("s")
            runtime = _SessionRuntime(session_id, project_id, project, config, state)
            self.sessions[session_id] = runtime
        if self.data_dir is not None:
            line = canonical_dumps(
                {
                    "seq": 0,
                    "timestamp": 0.0,
                    "kind": "session-created",
                    "payload": {
                        "project_id": project_id,
                        "config": documents.config_to_doc(config),
                    },
                },
                pretty=False,
            )
            self._session_path(session_id).write_text(line + "\n", encoding="utf-8")
        self.persist_events(runtime)
        return runtime

    def persist_events(self, runtime: _SessionRuntime) -> None:
        if self.data_dir is None:
            runtime.persisted_events = len(runtime.state.log)
            return
        fresh = runtime.state.log[runtime.persisted_events :]
        if not fresh:
            return
        with self._session_path(runtime.id).open("a", encoding="utf-8") as handle:
            for event in fresh:
                handle.write(documents.event_to_line(event) + "\n")
        runtime.persisted_events = len(runtime.state.log)

    def _session_path(self, session_id: str) -> Path:
        assert self.data_dir is not None
        return self.data_dir / "sessions" / f"{session_id}.jsonl"

    def _load(self) -> None:
        assert self.data_dir is not None
        for path in sorted((self.data_dir / "projects").glob("*.json")):
            try:
                self.projects[path.stem] = documents.load_project(path.read_bytes())
            except DocumentError as exc:
                logger.warning("skipping project %s: %s", path.name, exc)
        for path in sorted((self.data_dir / "sessions").glob("*.jsonl")):
            try:
                self._restore_session(path)
            except (DocumentError, KeyError, ProtocolError) as exc:
                logger.warning("skipping session %s: %s", path.name, exc)

    def _restore_session(self, path: Path) -> None:
        lines = [
            documents.parse_event_line(line)
            for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        if not lines or lines[0]["kind"] != "session-created":
            raise DocumentError("session log missing creation record")
        created = lines[0]["payload"]
        project_id = created["project_id"]
        project = self.projects[project_id]
        config = documents.config_from_doc(created.get("config"))
        decisions = [
            documents.decision_from_doc(entry["payload"])
            for entry in lines[1:]
            if entry["kind"] == "decision"
        ]
        state = engine.replay_decisions(project, decisions, config)
        _auto_advance(state)
        runtime = _SessionRuntime(path.stem, project_id, project, config, state)
        runtime.next_seq = len(decisions) + 1
        runtime.persisted_events = len(state.log)
        self.sessions[path.stem] = runtime


def _auto_advance(state: engine.SessionState) -> None:
    while state.phase is Phase.ADVANCING:
        engine.step(state)


def _canonical(doc: Any, status: int = 200) -> Response:
    return Response(
        canonical_dumps(doc) + "\n",
        status_code=status,
        media_type="application/json",
    )


def create_app(data_dir: Path | None = None) -> FastAPI:
    store = ServiceStore(data_dir)
    app = FastAPI(title="plancraft session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    def _project_or_404(project_id: str) -> Project:
        project = store.projects.get(project_id)
        if project is None:
            raise HTTPException(404, f"unknown project {project_id!r}")
        return project

    def _session_or_404(session_id: str) -> _SessionRuntime:
        runtime = store.sessions.get(session_id)
        if runtime is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return runtime

    @app.post("/projects")
    def create_project(payload: dict = Body(...)) -> Response:
        try:
            project = documents.doc_to_project(payload)
        except DocumentError as exc:
            raise HTTPException(422, str(exc)) from exc
        project_id = store.add_project(project)
        return _canonical({"id": project_id}, status=201)

    @app.get("/projects")
    def list_projects() -> Response:
        return _canonical({"projects": sorted(store.projects)})

    @app.get("/projects/{project_id}")
    def get_project(project_id: str) -> Response:
        project = _project_or_404(project_id)
        return _canonical(documents.project_to_doc(project))

    @app.get("/projects/{project_id}/validation")
    def get_validation(project_id: str) -> Response:
        from .model import validate_project

        project = _project_or_404(project_id)
        return _canonical(documents.validation_doc(validate_project(project)))

    @app.get("/projects/{project_id}/bounds")
    def get_bounds(project_id: str, semantics: str = "finish") -> Response:
        project = _project_or_404(project_id)
        return _canonical(
            documents.bounds_doc(project, _semantics_or_422(semantics))
        )

    @app.get("/projects/{project_id}/ideal")
    def get_ideal(project_id: str, semantics: str = "finish") -> Response:
        project = _project_or_404(project_id)
        return _canonical(documents.ideal_doc(project, _semantics_or_422(semantics)))

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)) -> Response:
        project_id = payload.get("project_id")
        if project_id not in store.projects:
            raise HTTPException(404, f"unknown project {project_id!r}")
        try:
            config = documents.config_from_doc(payload.get("config"))
        except DocumentError as exc:
            raise HTTPException(422, str(exc)) from exc
        runtime = store.create_session(project_id, config)
        with runtime.lock:
            return _canonical(_session_doc(runtime), status=201)

    @app.get("/sessions")
    def list_sessions() -> Response:
        rows = []
        for session_id in sorted(store.sessions):
            runtime = store.sessions[session_id]
            with runtime.lock:
                rows.append(
                    {
                        "id": session_id,
                        "project_id": runtime.project_id,
                        "phase": runtime.state.phase.value,
                        "clock": runtime.state.clock,
                        "committed_cost": runtime.state.committed_cost,
                    }
                )
        return _canonical({"sessions": rows})

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> Response:
        runtime = _session_or_404(session_id)
        with runtime.lock:
            return _canonical(_session_doc(runtime))

    @app.post("/sessions/{session_id}/decisions")
    def post_decision(session_id: str, payload: dict = Body(...)) -> Response:
        runtime = _session_or_404(session_id)
        with runtime.lock:
            if runtime.state.phase is not Phase.AWAITING_DECISION:
                raise HTTPException(
                    409, f"session is not awaiting a decision ({runtime.state.phase.value})"
                )
            seq = payload.get("seq")
            if seq != runtime.next_seq:
                raise HTTPException(
                    409, f"stale sequence number {seq!r}; expected {runtime.next_seq}"
                )
            try:
                decision = documents.decision_from_doc(payload.get("decision"))
            except DocumentError as exc:
                raise HTTPException(422, str(exc)) from exc
            try:
                engine.apply_decision(runtime.state, decision)
            except ProtocolError as exc:
                raise HTTPException(422, str(exc)) from exc
            runtime.next_seq += 1
            _auto_advance(runtime.state)
            store.persist_events(runtime)
            return _canonical(_session_doc(runtime))

    @app.post("/sessions/{session_id}/dry-run")
    def post_dry_run(session_id: str, payload: dict = Body(...)) -> Response:
        runtime = _session_or_404(session_id)
        with runtime.lock:
            if runtime.state.phase is not Phase.AWAITING_DECISION:
                raise HTTPException(
                    409, f"session is not awaiting a decision ({runtime.state.phase.value})"
                )
            try:
                decision = documents.decision_from_doc(payload.get("decision"))
            except DocumentError as exc:
                raise HTTPException(422, str(exc)) from exc
            try:
                projection = engine.dry_run(runtime.state, decision)
            except ProtocolError as exc:
                raise HTTPException(422, str(exc)) from exc
            doc = {
                "projected_t_delta": projection.projected_t_delta,
                "projected_c_delta": projection.projected_c_delta,
                "next_prompt": (
                    engine.prompt_payload(
                        projection.next_prompt, runtime.project.work_types
                    )
                    if projection.next_prompt is not None
                    else None
                ),
            }
            return _canonical(doc)

    @app.get("/sessions/{session_id}/plan")
    def get_plan(session_id: str) -> Response:
        runtime = _session_or_404(session_id)
        with runtime.lock:
            if runtime.state.phase is not Phase.COMPLETED or runtime.state.plan is None:
                raise HTTPException(
                    409, f"session is not completed ({runtime.state.phase.value})"
                )
            return _canonical(
                documents.plan_to_doc(runtime.state.plan, runtime.project)
            )

    ui_dir = os.environ.get("PLANCRAFT_UI_DIR")
    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _semantics_or_422(raw: str):
    from .model import PrecedenceSemantics

    try:
        return PrecedenceSemantics(raw)
    except ValueError as exc:
        raise HTTPException(422, f"unknown semantics {raw!r}") from exc


def _session_doc(runtime: _SessionRuntime) -> dict[str, Any]:
    doc = documents.session_to_doc(runtime.state, runtime.id, runtime.next_seq)
    doc["project_id"] = runtime.project_id
    return doc


__all__ = ["ServiceStore", "create_app"]
