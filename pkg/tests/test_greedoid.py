"""
Tests for greedoids, lexicographically minimal feasible words and activities.
"""

import pytest

from app.catalog import (
    ACTIVITY_SHOWCASE,
    ACYCLIC_TRIANGLE,
    DIRECTED_TRIANGLE,
    PARKING_SHOWCASE,
    TWO_VERTEX_COUNTEREXAMPLE,
)
from app.errors import GreedoidError
from app.greedoid import (
    BranchingGreedoid,
    Greedoid,
    external_activity,
    greedoid_polynomial,
    lexmin_feasible_word,
    lexmin_word_bruteforce,
    min_restriction_k,
    restriction,
    semi_active_edges,
    semi_activity_discrepancies,
    semi_activity_polynomial,
)

SHOWCASE_BASIS = frozenset({0, 2, 6, 7, 8})


@pytest.fixture()
def showcase_greedoid() -> BranchingGreedoid:
    return BranchingGreedoid(ACTIVITY_SHOWCASE, 0)


class TestGreedoidAxioms:
    """Feasibility oracles and the greedoid axioms."""

    def test_uniform_matroid(self):
        X = Greedoid(range(3), lambda subset: len(subset) <= 2)
        assert X.rank == 2
        assert len(X.bases) == 3
        assert len(X.feasible_sets) == 7

    def test_inaccessible_family(self):
        with pytest.raises(GreedoidError) as info:
            Greedoid(range(2), lambda subset: len(subset) in (0, 2))
        assert info.value.code == "GREEDOID_AXIOM"

    def test_exchange_failure(self):
        family = {frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 2})}
        with pytest.raises(GreedoidError) as info:
            Greedoid(range(3), lambda subset: subset in family)
        assert info.value.code == "GREEDOID_AXIOM"

    def test_empty_set_required(self):
        with pytest.raises(GreedoidError):
            Greedoid(range(2), lambda subset: bool(subset))

    def test_branching_bases_are_arborescences(self):
        X = BranchingGreedoid(PARKING_SHOWCASE, 0)
        assert X.rank == 3
        assert len(X.bases) == 4

    def test_not_a_basis(self, showcase_greedoid):
        with pytest.raises(GreedoidError) as info:
            showcase_greedoid.require_basis({0, 1})
        assert info.value.code == "NOT_A_BASIS"

    def test_restriction_keeps_subsets(self):
        X = BranchingGreedoid(ACYCLIC_TRIANGLE, 0)
        Y = restriction(X, [0, 1])
        assert Y.bases == (frozenset({0, 1}),)


class TestWords:
    def test_showcase_word(self, showcase_greedoid):
        """Labels 1, 3, 8, 7, 9 in one-based edge numbering."""
        assert lexmin_feasible_word(showcase_greedoid, SHOWCASE_BASIS) == (0, 2, 7, 6, 8)

    def test_greedy_matches_bruteforce(self, showcase_greedoid):
        for B in showcase_greedoid.bases:
            assert lexmin_feasible_word(showcase_greedoid, B) == lexmin_word_bruteforce(showcase_greedoid, B)

    def test_custom_order(self):
        X = BranchingGreedoid(ACYCLIC_TRIANGLE, 0)
        assert lexmin_feasible_word(X, {0, 2}) == (0, 2)
        assert lexmin_feasible_word(X, {0, 2}, order=[2, 1, 0]) == (2, 0)

    def test_incomplete_order(self):
        X = BranchingGreedoid(ACYCLIC_TRIANGLE, 0)
        with pytest.raises(GreedoidError):
            lexmin_feasible_word(X, {0, 2}, order=[0, 2])


class TestActivity:
    """External activity and semi-activity on the activity walkthrough graph."""

    def test_edge_into_root_is_active(self, showcase_greedoid):
        activity = external_activity(showcase_greedoid, SHOWCASE_BASIS)
        assert 1 in activity.active
        assert 5 not in activity.active

    def test_semi_activity(self):
        semi = semi_active_edges(ACTIVITY_SHOWCASE, 0, SHOWCASE_BASIS)
        assert 1 in semi
        assert 5 not in semi

    def test_semi_activity_needs_arborescence(self):
        with pytest.raises(GreedoidError) as info:
            semi_active_edges(ACTIVITY_SHOWCASE, 0, {0, 2})
        assert info.value.code == "NOT_AN_ARBORESCENCE"

    def test_semi_activity_polynomial_matches(self, showcase_greedoid):
        assert semi_activity_polynomial(ACTIVITY_SHOWCASE, 0) == greedoid_polynomial(showcase_greedoid)

    def test_discrepancies_are_listed(self):
        found = semi_activity_discrepancies(ACTIVITY_SHOWCASE, 0)
        assert all(semi != greedy for _, semi, greedy in found)


class TestGreedoidPolynomial:
    def test_parking_showcase(self):
        assert greedoid_polynomial(BranchingGreedoid(PARKING_SHOWCASE, 0)).as_list() == [1, 2, 1]

    def test_acyclic_triangle(self):
        assert greedoid_polynomial(BranchingGreedoid(ACYCLIC_TRIANGLE, 0)).as_list() == [1, 1]

    def test_directed_triangle_has_no_constant_term(self):
        assert greedoid_polynomial(BranchingGreedoid(DIRECTED_TRIANGLE, 0)).as_list() == [0, 1]

    def test_two_vertex_counterexample(self):
        assert greedoid_polynomial(BranchingGreedoid(TWO_VERTEX_COUNTEREXAMPLE, 0)).as_list() == [0, 0, 1]

    def test_order_independence(self, showcase_greedoid):
        base = greedoid_polynomial(showcase_greedoid, check_orders=0)
        assert greedoid_polynomial(showcase_greedoid, order=list(reversed(range(9))), check_orders=5, seed=7) == base

    def test_value_at_one_counts_bases(self, showcase_greedoid):
        assert greedoid_polynomial(showcase_greedoid)(1) == len(showcase_greedoid.bases)


class TestRestriction:
    """Fewest deletions giving a constant term equal the lowest exponent."""

    def test_directed_triangle(self):
        assert min_restriction_k(BranchingGreedoid(DIRECTED_TRIANGLE, 0)) == 1

    def test_two_vertex_counterexample(self):
        assert min_restriction_k(BranchingGreedoid(TWO_VERTEX_COUNTEREXAMPLE, 0)) == 2

    def test_acyclic(self):
        assert min_restriction_k(BranchingGreedoid(ACYCLIC_TRIANGLE, 0)) == 0
