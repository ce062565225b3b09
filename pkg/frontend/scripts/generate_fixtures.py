"""Record real service responses as JSON fixtures for the dashboard tests.

Run from the repository root after installing the backend package:

    python frontend/scripts/generate_fixtures.py

The dashboard's tests assert field-for-field fidelity against these files,
so they must always be regenerated from the live service, never edited.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from plancraft.documents import project_to_doc
from plancraft.model import Project, Task, Worker
from plancraft.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def rate_skew() -> Project:
    return Project(
        work_types=["S1"],
        tasks=[Task("A1", [], [4.0], [], 4.0), Task("A2", [], [4.0], [], 4.0)],
        workers=[Worker("W1", [1], [1.0]), Worker("W2", [1], [10.0])],
    )


def pigeonhole() -> Project:
    return Project(
        work_types=["S1"],
        tasks=[Task("A1", [], [4.0], [], 2.0), Task("A2", [], [4.0], [], 2.0)],
        workers=[Worker(f"W{j}", [1], [1.0]) for j in (1, 2, 3)],
    )


def chain() -> Project:
    return Project(
        work_types=["S1"],
        tasks=[
            Task("A1", [], [3.0], [], 3.0),
            Task("A2", ["A1"], [5.0], [], 5.0),
            Task("A3", ["A2"], [2.0], [], 2.0),
        ],
        workers=[Worker(f"W{j}", [1], [1.0]) for j in (1, 2, 3)],
    )


def staggered() -> Project:
    """Raises a cost-overrun prompt while another task is still running."""
    return Project(
        work_types=["S1"],
        tasks=[
            Task("A1", [], [6.0], [], 6.0),
            Task("B1", [], [2.0], [], 2.0),
            Task("C1", ["B1"], [2.0], [], 2.0),
        ],
        workers=[Worker("W1", [1], [1.0]), Worker("W2", [1], [10.0])],
    )


def dump(name: str, payload) -> None:
    path = FIXTURES / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path.relative_to(Path.cwd())}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())

    def post_project(project: Project) -> str:
        response = client.post("/projects", json=project_to_doc(project))
        response.raise_for_status()
        return response.json()["id"]

    def open_session(project_id: str) -> dict:
        response = client.post("/sessions", json={"project_id": project_id})
        response.raise_for_status()
        return response.json()

    # Case 2 prompt with nothing running, plus both dry-run projections.
    skew_pid = post_project(rate_skew())
    dump("project_rate_skew", client.get(f"/projects/{skew_pid}").json())
    session = open_session(skew_pid)
    sid = session["id"]
    dump("session_case2", session)
    dump(
        "dryrun_case2_accept",
        client.post(
            f"/sessions/{sid}/dry-run", json={"decision": {"kind": "accept-cost"}}
        ).json(),
    )
    dump(
        "dryrun_case2_defer",
        client.post(
            f"/sessions/{sid}/dry-run",
            json={"decision": {"kind": "defer-tasks", "tasks": ["A2"]}},
        ).json(),
    )
    dump(
        "session_case2_after_accept",
        client.post(
            f"/sessions/{sid}/decisions",
            json={"seq": 1, "decision": {"kind": "accept-cost"}},
        ).json(),
    )
    dump("plan_case2", client.get(f"/sessions/{sid}/plan").json())

    # Case 1 prompt with nothing running (defer-all must be disabled).
    hole_pid = post_project(pigeonhole())
    dump("session_case1", open_session(hole_pid))

    # Case 2 prompt while a task is still running (defer-all legal).
    stag_pid = post_project(staggered())
    session = open_session(stag_pid)
    stag_sid = session["id"]
    session = client.post(
        f"/sessions/{stag_sid}/decisions",
        json={"seq": 1, "decision": {"kind": "accept-cost"}},
    ).json()
    assert session["phase"] == "awaiting-decision" and session["running"]
    dump("session_case2_running", session)
    dump(
        "dryrun_case2_running_defer",
        client.post(
            f"/sessions/{stag_sid}/dry-run",
            json={"decision": {"kind": "defer-tasks", "tasks": ["C1"]}},
        ).json(),
    )

    # Completed session with its plan, and the project document for the DAG.
    chain_pid = post_project(chain())
    dump("project_chain", client.get(f"/projects/{chain_pid}").json())
    dump("bounds_chain", client.get(f"/projects/{chain_pid}/bounds").json())
    dump("ideal_chain", client.get(f"/projects/{chain_pid}/ideal").json())
    session = open_session(chain_pid)
    dump("session_completed", session)
    dump("plan_completed", client.get(f"/sessions/{session['id']}/plan").json())


if __name__ == "__main__":
    main()
