"""
Tests for the multidigraph model and its structural enumerations.
"""

import pytest

from app.catalog import ACYCLIC_TRIANGLE, DIRECTED_TRIANGLE, PARKING_SHOWCASE, SINGLE_EDGE, TWO_VERTEX_COUNTEREXAMPLE
from app.digraph import (
    DiGraph,
    UGraph,
    bipartition,
    bridges,
    connectivity_flags,
    enumerate_admissible_layerings,
    enumerate_directed_cuts,
    enumerate_orientations,
    enumerate_signed_cycles,
    enumerate_spanning_arborescences,
    enumerate_spanning_trees,
    find_layering,
    fundamental_cycle,
    is_acyclic,
    is_two_edge_connected,
    reachable_from,
    require_weakly_connected,
    standard_orientation,
)
from app.errors import DisconnectedInputError, InputError


class TestDiGraph:
    """Basic structure of the edge-indexed multidigraph."""

    def test_edge_vector(self):
        """x_e = 1_head - 1_tail, zero for loops."""
        assert ACYCLIC_TRIANGLE.edge_vector(2) == (-1, 0, 1)
        assert DiGraph(2, ((1, 1),)).edge_vector(0) == (0, 0)

    def test_net_degree_vector(self):
        assert ACYCLIC_TRIANGLE.net_degree_vector([2]) == (-1, 0, 1)
        assert ACYCLIC_TRIANGLE.net_degree_vector([0, 1]) == (-1, 0, 1)

    def test_out_of_range_edge(self):
        with pytest.raises(InputError) as info:
            DiGraph(2, ((0, 2),))
        assert info.value.code == "RANGE_ERROR"

    def test_subgraph_keeps_relative_order(self):
        """Chosen edges are re-indexed in their original order."""
        assert DIRECTED_TRIANGLE.subgraph([2, 0]).edges == ((0, 1), (2, 0))

    def test_reverse_edges(self):
        assert DIRECTED_TRIANGLE.reverse_edges([1]).edges == ((0, 1), (2, 1), (2, 0))

    def test_degrees_with_loops(self):
        G = DiGraph(2, ((0, 0), (0, 1)))
        assert G.outdegree(0) == 2
        assert G.outdegree(0, count_loops=False) == 1


class TestConnectivity:
    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedInputError) as info:
            require_weakly_connected(DiGraph(3, ((0, 1),)))
        assert info.value.code == "DISCONNECTED_INPUT"

    def test_flags_on_counterexample(self):
        """Strongly connected but not Eulerian."""
        flags = connectivity_flags(TWO_VERTEX_COUNTEREXAMPLE, 0)
        assert flags.strongly_connected
        assert flags.s_root_connected
        assert not flags.eulerian

    def test_root_connectivity_depends_on_root(self):
        assert connectivity_flags(ACYCLIC_TRIANGLE, 0).s_root_connected
        assert not connectivity_flags(ACYCLIC_TRIANGLE, 1).s_root_connected

    def test_reachable_from(self):
        assert reachable_from(ACYCLIC_TRIANGLE, 1) == {1, 2}
        assert reachable_from(DIRECTED_TRIANGLE, 0, edge_ids=[0]) == {0, 1}

    def test_acyclicity(self):
        assert is_acyclic(ACYCLIC_TRIANGLE)
        assert not is_acyclic(DIRECTED_TRIANGLE)
        assert is_acyclic(DIRECTED_TRIANGLE, edge_ids=[0, 1])
        assert not is_acyclic(DiGraph(1, ((0, 0),)))

    def test_bridges(self):
        assert bridges(SINGLE_EDGE) == (0,)
        assert bridges(DIRECTED_TRIANGLE) == ()
        assert is_two_edge_connected(DIRECTED_TRIANGLE)
        assert not is_two_edge_connected(SINGLE_EDGE)


class TestDirectedCuts:
    """Directed cuts found by bipartition scanning."""

    def test_acyclic_triangle_cuts(self):
        """Two elementary directed cuts: edges {0, 2} out of vertex 0 and {1, 2} into vertex 2."""
        cuts = enumerate_directed_cuts(ACYCLIC_TRIANGLE)
        assert [cut.edges for cut in cuts] == [(0, 2), (1, 2)]
        assert all(cut.elementary for cut in cuts)
        assert cuts[0].tail_shore == frozenset({0})

    def test_strongly_connected_has_no_cut(self):
        assert enumerate_directed_cuts(DIRECTED_TRIANGLE) == []

    def test_non_elementary_cut(self):
        """Two edges out of a middle vertex form a cut whose removal leaves three components."""
        G = DiGraph(3, ((1, 0), (1, 2)))
        cuts = {cut.edges: cut.elementary for cut in enumerate_directed_cuts(G)}
        assert cuts == {(0,): True, (1,): True, (0, 1): False}


class TestCyclesAndLayerings:
    def test_acyclic_triangle_cycle(self):
        """One signed cycle, two edges one way and one the other."""
        cycles = enumerate_signed_cycles(ACYCLIC_TRIANGLE)
        assert len(cycles) == 1
        assert cycles[0].plus == frozenset({0, 1})
        assert cycles[0].minus == frozenset({2})
        assert not cycles[0].is_balanced

    def test_parallel_edges_and_loops_are_cycles(self):
        G = DiGraph(2, ((0, 1), (1, 0), (1, 1)))
        edge_sets = sorted(sorted(c.edges) for c in enumerate_signed_cycles(G))
        assert edge_sets == [[0, 1], [2]]

    def test_layering_of_square(self):
        square = DiGraph(4, ((0, 1), (1, 2), (0, 3), (3, 2)))
        layering = find_layering(square)
        assert layering is not None
        assert layering.values == (0, 1, 2, 1)

    def test_no_layering_for_unbalanced_cycle(self):
        assert find_layering(ACYCLIC_TRIANGLE) is None
        assert find_layering(DIRECTED_TRIANGLE) is None

    def test_admissible_layerings_of_directed_triangle(self):
        """One admissible layering per spanning tree of the directed 3-cycle."""
        layerings = enumerate_admissible_layerings(DIRECTED_TRIANGLE)
        assert [layering.values for layering in layerings] == [(0, -2, -1), (0, 1, -1), (0, 1, 2)]
        assert all(layering.is_admissible(DIRECTED_TRIANGLE) for layering in layerings)

    def test_spanning_trees(self):
        assert list(enumerate_spanning_trees(DIRECTED_TRIANGLE)) == [(0, 1), (0, 2), (1, 2)]

    def test_fundamental_cycle_directions(self):
        """Edge 0->2 closed by the tree path 2->1->0, both tree edges walked backwards."""
        assert fundamental_cycle(ACYCLIC_TRIANGLE, (0, 1), 2) == [(2, True), (1, False), (0, False)]


class TestArborescences:
    def test_acyclic_triangle(self):
        assert enumerate_spanning_arborescences(ACYCLIC_TRIANGLE, 0) == [(0, 1), (0, 2)]

    def test_parking_showcase_count(self):
        assert len(enumerate_spanning_arborescences(PARKING_SHOWCASE, 0)) == 4

    def test_unreachable_root(self):
        assert enumerate_spanning_arborescences(ACYCLIC_TRIANGLE, 2) == []


class TestUndirected:
    def test_orientations(self):
        U = UGraph(2, ((0, 1),))
        assert [G.edges for G in enumerate_orientations(U)] == [((1, 0),), ((0, 1),)]

    def test_bipartition_and_standard_orientation(self):
        path = UGraph(3, ((0, 1), (1, 2)))
        assert bipartition(path) == (frozenset({0, 2}), frozenset({1}))
        standard = standard_orientation(path)
        assert standard is not None
        assert standard.edges == ((0, 1), (2, 1))

    def test_odd_cycle_is_not_bipartite(self):
        triangle = UGraph(3, ((0, 1), (1, 2), (2, 0)))
        assert bipartition(triangle) is None
        assert standard_orientation(triangle) is None
