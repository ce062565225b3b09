from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from plancraft.model import Project, Task, Worker


def flat_workers(count: int, rate: float = 1.0, q: int = 1) -> list[Worker]:
    return [Worker(f"W{j + 1}", [True] * q, [rate] * q) for j in range(count)]


@pytest.fixture
def chain3() -> Project:
    """A1(3) -> A2(5) -> A3(2), one work type, ample flat-rate workers."""
    return Project(
        work_types=["S1"],
        tasks=[
            Task("A1", [], [3.0], [], 3.0),
            Task("A2", ["A1"], [5.0], [], 5.0),
            Task("A3", ["A2"], [2.0], [], 2.0),
        ],
        workers=flat_workers(3),
    )


@pytest.fixture
def star() -> Project:
    """Root A1(2); A2(3) and A3(1) each depend only on A1."""
    return Project(
        work_types=["S1"],
        tasks=[
            Task("A1", [], [2.0], [], 2.0),
            Task("A2", ["A1"], [3.0], [], 3.0),
            Task("A3", ["A1"], [1.0], [], 1.0),
        ],
        workers=flat_workers(2),
    )


@pytest.fixture
def diamond() -> Project:
    """A1(1) -> {A2(1), A3(4)} -> A4(1)."""
    return Project(
        work_types=["S1"],
        tasks=[
            Task("A1", [], [1.0], [], 1.0),
            Task("A2", ["A1"], [1.0], [], 1.0),
            Task("A3", ["A1"], [4.0], [], 4.0),
            Task("A4", ["A2", "A3"], [1.0], [], 1.0),
        ],
        workers=flat_workers(2),
    )


@pytest.fixture
def rate_skew() -> Project:
    """Two independent one-worker tasks; the pool has one cheap, one dear worker."""
    return Project(
        work_types=["S1"],
        tasks=[
            Task("A1", [], [4.0], [], 4.0),
            Task("A2", [], [4.0], [], 4.0),
        ],
        workers=[Worker("W1", [True], [1.0]), Worker("W2", [True], [10.0])],
    )


@pytest.fixture
def pigeonhole() -> Project:
    """Two independent tasks demanding 2 workers each; only 3 workers exist."""
    return Project(
        work_types=["S1"],
        tasks=[
            Task("A1", [], [4.0], [], 2.0),
            Task("A2", [], [4.0], [], 2.0),
        ],
        workers=flat_workers(3),
    )


@pytest.fixture
def short_staffed() -> Project:
    """One task demanding two skilled workers; only one worker is skilled."""
    return Project(
        work_types=["S1", "S2"],
        tasks=[Task("A1", [], [4.0, 0.0], [], 2.0)],
        workers=[
            Worker("W1", [True, False], [3.0, 0.0]),
            Worker("W2", [False, True], [0.0, 2.0]),
        ],
    )
