"""
Tests for graph parking functions, Chan's identity and the Eulerian comparison with dual matroids.
"""

import pytest

from app.catalog import (
    ACTIVITY_SHOWCASE,
    ACYCLIC_TRIANGLE,
    DIRECTED_TRIANGLE,
    PARKING_SHOWCASE,
    TWO_VERTEX_COUNTEREXAMPLE,
    TWO_VERTEX_EULERIAN,
)
from app.digraph import DiGraph, enumerate_spanning_arborescences
from app.errors import InputError, NotEulerianError, NotRootConnectedError
from app.greedoid import BranchingGreedoid, greedoid_polynomial
from app.parking import (
    chan_transform,
    eulerian_duality_check,
    is_parking_function,
    parking_enumerator,
    parking_functions,
    reachable_part,
    reduced_greedoid_polynomial,
)


class TestParkingFunctions:
    """Membership and enumeration."""

    def test_acyclic_triangle_functions(self):
        assert parking_functions(ACYCLIC_TRIANGLE, 0) == [{1: 0, 2: 0}, {1: 0, 2: 1}]

    def test_violating_set_is_reported(self):
        """Vertex 1 has a single entering edge, so it cannot take the value 1."""
        check = is_parking_function(ACYCLIC_TRIANGLE, 0, {1: 1, 2: 0})
        assert not check.ok
        assert check.violating == (1,)

    def test_negative_values_rejected(self):
        with pytest.raises(InputError) as info:
            is_parking_function(ACYCLIC_TRIANGLE, 0, {1: -1, 2: 0})
        assert info.value.code == "RANGE_ERROR"

    def test_single_vertex(self):
        assert parking_enumerator(DiGraph(1), 0).as_list() == [1]


class TestEnumerator:
    def test_parking_showcase(self):
        assert parking_enumerator(PARKING_SHOWCASE, 0).as_list() == [1, 2, 1]

    def test_two_vertex_counterexample(self):
        assert parking_enumerator(TWO_VERTEX_COUNTEREXAMPLE, 0).as_list() == [1]

    def test_value_at_one_counts_arborescences(self):
        for G in (PARKING_SHOWCASE, ACYCLIC_TRIANGLE, ACTIVITY_SHOWCASE):
            assert parking_enumerator(G, 0)(1) == len(enumerate_spanning_arborescences(G, 0))


class TestChanIdentity:
    """lambda(x) = x^(|E|-|V|+1) park(1/x)."""

    def test_parking_showcase(self):
        assert chan_transform(PARKING_SHOWCASE, 0).as_list() == [1, 2, 1]

    def test_acyclic_triangle(self):
        assert chan_transform(ACYCLIC_TRIANGLE, 0).as_list() == [1, 1]

    def test_two_vertex_counterexample(self):
        assert chan_transform(TWO_VERTEX_COUNTEREXAMPLE, 0).as_list() == [0, 0, 1]

    def test_matches_greedoid_polynomial(self):
        expected = greedoid_polynomial(BranchingGreedoid(ACTIVITY_SHOWCASE, 0))
        assert chan_transform(ACTIVITY_SHOWCASE, 0, check=False) == expected

    def test_unreachable_root(self):
        with pytest.raises(NotRootConnectedError):
            chan_transform(ACYCLIC_TRIANGLE, 1)


class TestEulerianDuality:
    """On Eulerian digraphs park is root independent and equals the dual interior polynomial."""

    def test_directed_triangle(self):
        report = eulerian_duality_check(DIRECTED_TRIANGLE)
        assert report.dual_interior.as_list() == [1]
        assert report.root_independent
        assert report.equal

    def test_two_vertex(self):
        report = eulerian_duality_check(TWO_VERTEX_EULERIAN)
        assert report.equal
        assert report.dual_interior.as_list() == [1]

    def test_activity_showcase(self):
        report = eulerian_duality_check(ACTIVITY_SHOWCASE)
        assert report.root_independent
        assert report.equal

    def test_reports_requested_root(self):
        report = eulerian_duality_check(ACTIVITY_SHOWCASE, 3)
        assert report.root == 3
        assert report.park == parking_enumerator(ACTIVITY_SHOWCASE, 3)
        assert report.equal

    def test_root_out_of_range(self):
        with pytest.raises(InputError) as info:
            eulerian_duality_check(DIRECTED_TRIANGLE, 5)
        assert info.value.code == "RANGE_ERROR"

    def test_non_eulerian_rejected(self):
        with pytest.raises(NotEulerianError) as info:
            eulerian_duality_check(ACYCLIC_TRIANGLE)
        assert info.value.code == "NOT_EULERIAN"

    def test_non_eulerian_depends_on_root(self):
        """The counterexample graph has different enumerators at its two roots."""
        assert parking_enumerator(TWO_VERTEX_COUNTEREXAMPLE, 0) != parking_enumerator(TWO_VERTEX_COUNTEREXAMPLE, 1)


class TestReachablePart:
    def test_relabels_with_root_first(self):
        G = DiGraph(4, ((2, 3), (2, 1), (0, 2)))
        part = reachable_part(G, 2)
        assert part.n == 3
        assert part.edges == ((0, 2), (0, 1))

    def test_reduction_matches_greedoid_polynomial(self):
        """Root 1 of the acyclic triangle reaches one edge; the two others are active in every basis."""
        expected = greedoid_polynomial(BranchingGreedoid(ACYCLIC_TRIANGLE, 1))
        assert reduced_greedoid_polynomial(ACYCLIC_TRIANGLE, 1) == expected
        assert expected.as_list() == [0, 0, 1]

    def test_reduction_at_spanning_root_is_unchanged(self):
        assert reduced_greedoid_polynomial(PARKING_SHOWCASE, 0).as_list() == [1, 2, 1]
