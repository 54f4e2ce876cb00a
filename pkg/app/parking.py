"""
Graph parking functions of rooted digraphs, their enumerator, Chan's identity
and the comparison with interior polynomials of dual matroids on Eulerian digraphs.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping

from app.algebra import Polynomial
from app.digraph import DiGraph, connectivity_flags, reachable_from
from app.errors import CheckFailure, InputError, NotEulerianError, NotRootConnectedError
from app.greedoid import BranchingGreedoid, greedoid_polynomial
from app.matroid import dual_matroid, graphic_matroid, matroid_interior_polynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParkingCheck:
    ok: bool
    violating: tuple[int, ...] | None = None


def _entering(G: DiGraph, outside: frozenset[int], u: int) -> int:
    """Number of edges from ``outside`` into u."""
    return sum(1 for t, h in G.edges if h == u and t in outside)


def is_parking_function(G: DiGraph, s: int, p: Mapping[int, int]) -> ParkingCheck:
    """Every nonempty S avoiding s has a u with p(u) below the edges entering u from outside S."""
    if any(value < 0 for value in p.values()):
        raise InputError(f"parking function values must be nonnegative, got {dict(p)}", "RANGE_ERROR")
    others = [v for v in range(G.n) if v != s]
    everything = frozenset(range(G.n))
    for size in range(1, len(others) + 1):
        for S in combinations(others, size):
            outside = everything - frozenset(S)
            if not any(p.get(u, 0) < _entering(G, outside, u) for u in S):
                return ParkingCheck(False, S)
    return ParkingCheck(True)


def parking_functions(G: DiGraph, s: int) -> list[dict[int, int]]:
    """All parking functions, enumerated inside the box p(v) < non-loop indegree of v."""
    others = [v for v in range(G.n) if v != s]
    ranges = [range(G.indegree(v, count_loops=False)) for v in others]
    found = []
    for values in product(*ranges):
        p = dict(zip(others, values))
        if is_parking_function(G, s, p).ok:
            found.append(p)
    return found


def parking_enumerator(G: DiGraph, s: int) -> Polynomial:
    """Sum of x^|p| over parking functions."""
    return Polynomial.from_exponents(sum(p.values()) for p in parking_functions(G, s))


def reachable_part(G: DiGraph, s: int) -> DiGraph:
    """Subgraph induced on the vertices reachable from s, relabelled in increasing order with s kept first."""
    keep = sorted(reachable_from(G, s), key=lambda v: (v != s, v))
    index = {v: i for i, v in enumerate(keep)}
    edges = tuple((index[t], index[h]) for t, h in G.edges if t in index and h in index)
    return DiGraph(len(keep), edges)


def reduced_greedoid_polynomial(G: DiGraph, s: int) -> Polynomial:
    """
    x^(|E|-|E'|) times the greedoid polynomial of the part G' reachable from s.

    Edges outside G' are active in every basis.
    """
    part = reachable_part(G, s)
    return greedoid_polynomial(BranchingGreedoid(part, 0), check_orders=0).shift(G.m - part.m)


def chan_transform(G: DiGraph, s: int, check: bool = True) -> Polynomial:
    """x^(|E|-|V|+1) park(1/x); with ``check`` it must equal the branching greedoid polynomial."""
    if not connectivity_flags(G, s).s_root_connected:
        raise NotRootConnectedError(f"not every vertex is reachable from the root {s}")
    result = parking_enumerator(G, s).reversed_into(G.m - G.n + 1)
    if check:
        expected = greedoid_polynomial(BranchingGreedoid(G, s), check_orders=0)
        if result != expected:
            raise CheckFailure(
                f"reversed parking enumerator {result.as_list()} differs from the greedoid polynomial "
                f"{expected.as_list()}",
                "THEOREM_VIOLATION",
            )
    return result


@dataclass(frozen=True)
class EulerianDualityReport:
    root: int
    park_by_root: tuple[Polynomial, ...]
    dual_interior: Polynomial

    @property
    def park(self) -> Polynomial:
        """Enumerator at the requested root."""
        return self.park_by_root[self.root]

    @property
    def root_independent(self) -> bool:
        return len(set(self.park_by_root)) == 1

    @property
    def equal(self) -> bool:
        return all(p == self.dual_interior for p in self.park_by_root)


def eulerian_duality_check(G: DiGraph, s: int = 0) -> EulerianDualityReport:
    """Parking enumerators at every root against the dual interior polynomial; ``s`` picks the reported root."""
    if not 0 <= s < G.n:
        raise InputError(f"root {s} outside 0..{G.n - 1}", "RANGE_ERROR")
    flags = connectivity_flags(G, s)
    if not flags.eulerian or not flags.weakly_connected:
        raise NotEulerianError("the comparison with the dual matroid needs a connected Eulerian digraph")
    park = tuple(parking_enumerator(G, root) for root in range(G.n))
    dual = matroid_interior_polynomial(dual_matroid(graphic_matroid(G)), check=False)
    report = EulerianDualityReport(s, park, dual)
    if not report.equal:
        logger.warning(f"parking enumerators {[p.as_list() for p in park]} differ from {dual.as_list()}")
    return report
