"""
Tests for minimum dijoins, directed-cut packings and feedback arc sets.
"""

import pytest

from app.catalog import ACYCLIC_TRIANGLE, DIJOIN_SHOWCASE, DIRECTED_TRIANGLE, SINGLE_EDGE, TWO_VERTEX_COUNTEREXAMPLE
from app.digraph import DiGraph
from app.dijoin import (
    is_dijoin,
    is_long_arc_dijoin,
    max_cut_packing,
    max_disjoint_directed_cuts,
    min_dijoins,
    min_reversals_to_strong,
    minfas,
    minfas_rooted,
)
from app.errors import DisconnectedInputError, NotRootConnectedError, TooLargeError

SHOWCASE_NET_VECTORS = {
    (1, -1, 2, -1, -1, 1, -2, 1),
    (2, -1, 1, -1, -1, 1, -2, 1),
    (1, -1, 2, -1, -2, 1, -1, 1),
    (2, -1, 1, -1, -2, 1, -1, 1),
}


class TestDijoins:
    """Minimum dijoins and their net degree vectors."""

    def test_acyclic_triangle(self):
        """The long edge alone meets both directed cuts."""
        certificate = min_dijoins(ACYCLIC_TRIANGLE)
        assert certificate.nu == 1
        assert certificate.min_dijoins == ((2,),)
        assert certificate.net_degree_vectors == ((-1, 0, 1),)

    def test_strongly_connected_needs_nothing(self):
        certificate = min_dijoins(DIRECTED_TRIANGLE)
        assert certificate.nu == 0
        assert certificate.min_dijoins == ((),)
        assert certificate.net_degree_vectors == ((0, 0, 0),)

    def test_showcase(self):
        """nu = 5 with 18 minimum dijoins and four net degree vectors."""
        certificate = min_dijoins(DIJOIN_SHOWCASE)
        assert certificate.nu == 5
        assert len(certificate.min_dijoins) == 18
        assert set(certificate.net_degree_vectors) == SHOWCASE_NET_VECTORS

    def test_exhaustive_search_agrees(self):
        """Dropping the cycle-free restriction finds the same optimum and vectors."""
        fast = min_dijoins(DIJOIN_SHOWCASE)
        slow = min_dijoins(DIJOIN_SHOWCASE, exhaustive=True)
        assert slow.nu == fast.nu
        assert slow.net_degree_vectors == fast.net_degree_vectors
        assert set(fast.min_dijoins) <= set(slow.min_dijoins)

    def test_is_dijoin(self):
        assert is_dijoin(ACYCLIC_TRIANGLE, [0, 1])
        assert not is_dijoin(ACYCLIC_TRIANGLE, [0])

    def test_long_arc(self):
        """Edges 0 and 1 are the longer side of the triangle's signed cycle."""
        assert is_long_arc_dijoin(ACYCLIC_TRIANGLE, [0, 1])
        assert not is_long_arc_dijoin(ACYCLIC_TRIANGLE, [2])

    def test_minimum_dijoins_are_never_long_arc(self):
        assert not any(is_long_arc_dijoin(DIJOIN_SHOWCASE, K) for K in min_dijoins(DIJOIN_SHOWCASE).min_dijoins)

    def test_budget_guard(self):
        with pytest.raises(TooLargeError) as info:
            min_dijoins(ACYCLIC_TRIANGLE, max_edges=2)
        assert info.value.code == "TOO_LARGE"

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedInputError):
            min_dijoins(DiGraph(3, ((0, 1),)))


class TestCutPacking:
    def test_disjoint_masks(self):
        assert max_cut_packing([0b011, 0b110, 0b100, 0b001]) == [0, 2]
        assert max_cut_packing([]) == []

    def test_acyclic_triangle(self):
        assert max_disjoint_directed_cuts(ACYCLIC_TRIANGLE).size == 1

    def test_showcase_matches_nu(self):
        """Five edge-disjoint directed cuts, as many as a minimum dijoin has edges."""
        packing = max_disjoint_directed_cuts(DIJOIN_SHOWCASE)
        assert packing.size == 5
        used = [edge for cut in packing.cuts for edge in cut.edges]
        assert len(used) == len(set(used))

    def test_strongly_connected(self):
        assert max_disjoint_directed_cuts(DIRECTED_TRIANGLE).size == 0


class TestFeedbackArcSets:
    """Plain and root-connected minimum feedback arc sets."""

    def test_acyclic(self):
        assert minfas(ACYCLIC_TRIANGLE).size == 0

    def test_directed_triangle(self):
        assert minfas(DIRECTED_TRIANGLE).size == 1
        assert minfas_rooted(DIRECTED_TRIANGLE, 0).size == 1

    def test_two_vertex_counterexample(self):
        """Deleting the root's only out-edge breaks reachability, so two back edges must go."""
        assert minfas(TWO_VERTEX_COUNTEREXAMPLE).size == 1
        rooted = minfas_rooted(TWO_VERTEX_COUNTEREXAMPLE, 0)
        assert rooted.size == 2
        assert rooted.witness == (1, 2)

    def test_unreachable_root(self):
        with pytest.raises(NotRootConnectedError) as info:
            minfas_rooted(ACYCLIC_TRIANGLE, 2)
        assert info.value.code == "NOT_ROOT_CONNECTED"

    def test_loop_is_its_own_cycle(self):
        assert minfas(DiGraph(2, ((0, 1), (1, 1)))).size == 1


class TestReversals:
    def test_reversing_long_edge(self):
        assert min_reversals_to_strong(ACYCLIC_TRIANGLE) == 1

    def test_bridge_cannot_be_strong(self):
        assert min_reversals_to_strong(SINGLE_EDGE) is None

    def test_already_strong(self):
        assert min_reversals_to_strong(DIRECTED_TRIANGLE) == 0
