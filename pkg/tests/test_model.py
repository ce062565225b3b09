from __future__ import annotations

import random

import pytest

from plancraft.model import (
    Hierarchy,
    Project,
    Task,
    Topology,
    UnknownTaskError,
    ViolationKind,
    Worker,
    classify_topology,
    is_valid_hierarchy,
    validate_project,
)


def project_of(tasks, workers=(), q=1):
    return Project([f"S{i + 1}" for i in range(q)], [], tasks, workers)


class TestValidateProject:
    def test_minimal_well_formed_project_is_valid(self):
        project = project_of([Task("A1", [], [1.0], [], 1.0)])
        report = validate_project(project)
        assert report.is_valid
        assert report.violations == ()

    def test_two_cycle_is_reported(self):
        project = project_of(
            [
                Task("A1", ["A2"], [1.0], [], 1.0),
                Task("A2", ["A1"], [1.0], [], 1.0),
            ]
        )
        report = validate_project(project)
        assert ViolationKind.DEPENDENCY_CYCLE in report.kinds()

    def test_wrong_work_vector_length_is_dimension_mismatch(self):
        project = project_of([Task("A1", [], [1.0, 2.0], [], 1.0)], q=3)
        report = validate_project(project)
        assert ViolationKind.DIMENSION_MISMATCH in report.kinds()

    def test_dangling_predecessor(self):
        project = project_of([Task("A1", ["ghost"], [1.0], [], 1.0)])
        assert ViolationKind.DANGLING_PREDECESSOR in validate_project(project).kinds()

    def test_self_predecessor_counts_as_cycle(self):
        project = project_of([Task("A1", ["A1"], [1.0], [], 1.0)])
        assert ViolationKind.DEPENDENCY_CYCLE in validate_project(project).kinds()

    def test_non_positive_duration(self):
        project = project_of([Task("A1", [], [1.0], [], 0.0)])
        assert ViolationKind.NON_POSITIVE_DURATION in validate_project(project).kinds()

    def test_duplicate_task_ids(self):
        project = project_of(
            [Task("A1", [], [1.0], [], 1.0), Task("A1", [], [1.0], [], 2.0)]
        )
        assert ViolationKind.DUPLICATE_ID in validate_project(project).kinds()

    def test_worker_dimension_mismatch(self):
        project = project_of(
            [Task("A1", [], [1.0], [], 1.0)],
            workers=[Worker("W1", [True, False], [1.0, 2.0])],
        )
        assert ViolationKind.DIMENSION_MISMATCH in validate_project(project).kinds()

    def test_empty_project(self):
        report = validate_project(project_of([]))
        assert ViolationKind.EMPTY_PROJECT in report.kinds()

    def test_negative_values_flagged(self):
        project = project_of([Task("A1", [], [-1.0], [], 1.0)])
        assert ViolationKind.NEGATIVE_VALUE in validate_project(project).kinds()


class TestHierarchy:
    @pytest.fixture
    def chain(self):
        return project_of(
            [
                Task("A1", [], [1.0], [], 1.0),
                Task("A2", ["A1"], [1.0], [], 1.0),
                Task("A3", ["A2"], [1.0], [], 1.0),
            ]
        )

    def test_topological_order_is_valid(self, chain):
        assert is_valid_hierarchy(Hierarchy(["A1", "A2", "A3"]), chain)

    def test_predecessor_after_dependent_is_invalid(self, chain):
        assert not is_valid_hierarchy(Hierarchy(["A2", "A1", "A3"]), chain)

    def test_independent_tasks_order_freely(self):
        project = project_of(
            [Task("A1", [], [1.0], [], 1.0), Task("A2", [], [1.0], [], 1.0)]
        )
        assert is_valid_hierarchy(Hierarchy(["A2", "A1"]), project)

    def test_unknown_task_raises(self, chain):
        with pytest.raises(UnknownTaskError):
            is_valid_hierarchy(Hierarchy(["A1", "A2", "BAD"]), chain)

    def test_incomplete_cover_is_invalid(self, chain):
        assert not is_valid_hierarchy(Hierarchy(["A1", "A2"]), chain)


class TestClassifyTopology:
    def test_chain_is_straight_line(self):
        project = project_of(
            [
                Task("A1", [], [1.0], [], 1.0),
                Task("A2", ["A1"], [1.0], [], 1.0),
                Task("A3", ["A2"], [1.0], [], 1.0),
            ]
        )
        assert classify_topology(project) is Topology.STRAIGHT_LINE

    def test_two_node_chain_is_straight_line_not_star(self):
        project = project_of(
            [Task("A1", [], [1.0], [], 1.0), Task("A2", ["A1"], [1.0], [], 1.0)]
        )
        assert classify_topology(project) is Topology.STRAIGHT_LINE

    def test_star(self):
        project = project_of(
            [Task("A1", [], [1.0], [], 1.0)]
            + [Task(f"A{i}", ["A1"], [1.0], [], 1.0) for i in (2, 3, 4)]
        )
        assert classify_topology(project) is Topology.STAR

    def test_tree(self):
        project = project_of(
            [
                Task("A1", [], [1.0], [], 1.0),
                Task("A2", ["A1"], [1.0], [], 1.0),
                Task("A3", ["A1"], [1.0], [], 1.0),
                Task("A4", ["A2"], [1.0], [], 1.0),
            ]
        )
        assert classify_topology(project) is Topology.TREE

    def test_multi_predecessor_node_makes_general(self):
        project = project_of(
            [
                Task("A1", [], [1.0], [], 1.0),
                Task("A2", ["A1"], [1.0], [], 1.0),
                Task("A3", ["A1"], [1.0], [], 1.0),
                Task("A4", ["A3", "A2"], [1.0], [], 1.0),
            ]
        )
        assert classify_topology(project) is Topology.GENERAL

    def test_single_task_is_straight_line(self):
        assert (
            classify_topology(project_of([Task("A1", [], [1.0], [], 1.0)]))
            is Topology.STRAIGHT_LINE
        )

    def test_classification_invariant_under_task_permutation(self):
        rng = random.Random(7)
        tasks = [
            Task("A1", [], [1.0], [], 1.0),
            Task("A2", ["A1"], [1.0], [], 1.0),
            Task("A3", ["A1"], [1.0], [], 1.0),
            Task("A4", ["A2"], [1.0], [], 1.0),
        ]
        baseline = classify_topology(project_of(tasks))
        for _ in range(10):
            shuffled = tasks[:]
            rng.shuffle(shuffled)
            assert classify_topology(project_of(shuffled)) is baseline
