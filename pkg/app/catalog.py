"""
Reference instances and instance families for the verification sweeps.

Families are grown one edge at a time from a single vertex and deduplicated up
to isomorphism with networkx, so every returned graph is connected and no two
are isomorphic. Random instances are drawn from a seeded ``random.Random``.
"""

import logging
import random
from itertools import permutations
from typing import Callable, Iterable, Sequence, TypeVar

import networkx as nx

from app.digraph import DiGraph, UGraph, bipartition, connectivity_flags
from app.matroid import OrientedRegularMatroid, graphic_matroid, scramble

logger = logging.getLogger(__name__)

# Eight vertices: two squares joined through vertex 4; nu = 5 with 18 minimum dijoins.
DIJOIN_SHOWCASE = DiGraph(8, ((1, 0), (3, 0), (1, 2), (3, 2), (4, 0), (4, 7), (4, 5), (6, 5), (6, 7), (6, 2)))

# Eulerian, root 0; edge i carries label i + 1 in the activity walkthrough.
ACTIVITY_SHOWCASE = DiGraph(6, ((0, 1), (2, 0), (0, 3), (4, 0), (2, 3), (1, 2), (5, 2), (3, 5), (3, 4)))

ORIENTATION_PAIR_LEFT = (
    DiGraph(7, ((1, 0), (0, 2), (0, 3), (0, 4), (1, 4), (2, 3), (5, 2), (2, 6), (4, 6), (5, 6))),
    DiGraph(7, ((1, 0), (0, 2), (0, 3), (4, 0), (1, 4), (2, 3), (5, 2), (2, 6), (4, 6), (5, 6))),
)

ORIENTATION_PAIR_RIGHT = (
    DiGraph(6, ((0, 2), (2, 1), (3, 0), (1, 3), (0, 4), (4, 1), (5, 0), (1, 5))),
    DiGraph(6, ((0, 2), (2, 1), (3, 0), (1, 3), (0, 4), (4, 1), (5, 0), (5, 1))),
)

PARKING_SHOWCASE = DiGraph(4, ((0, 1), (0, 2), (1, 2), (2, 3), (1, 3)))

SINGLE_EDGE = DiGraph(2, ((0, 1),))
ACYCLIC_TRIANGLE = DiGraph(3, ((0, 1), (1, 2), (0, 2)))
DIRECTED_TRIANGLE = DiGraph(3, ((0, 1), (1, 2), (2, 0)))
# One edge out of the root, two back: minfas 1 but rooted minfas 2.
TWO_VERTEX_COUNTEREXAMPLE = DiGraph(2, ((0, 1), (1, 0), (1, 0)))
TWO_VERTEX_EULERIAN = DiGraph(2, ((0, 1), (1, 0)))

REFERENCE_INSTANCES: dict[str, DiGraph] = {
    "dijoin-showcase": DIJOIN_SHOWCASE,
    "activity-showcase": ACTIVITY_SHOWCASE,
    "orientation-left-a": ORIENTATION_PAIR_LEFT[0],
    "orientation-left-b": ORIENTATION_PAIR_LEFT[1],
    "orientation-right-strong": ORIENTATION_PAIR_RIGHT[0],
    "orientation-right-weak": ORIENTATION_PAIR_RIGHT[1],
    "parking-showcase": PARKING_SHOWCASE,
    "single-edge": SINGLE_EDGE,
    "acyclic-triangle": ACYCLIC_TRIANGLE,
    "directed-triangle": DIRECTED_TRIANGLE,
    "two-vertex-counterexample": TWO_VERTEX_COUNTEREXAMPLE,
    "two-vertex-eulerian": TWO_VERTEX_EULERIAN,
}

GraphT = TypeVar("GraphT", DiGraph, UGraph)


def _invariant(graph: DiGraph | UGraph) -> tuple:
    nxg = graph.to_networkx()
    if isinstance(graph, DiGraph):
        degrees = sorted((nxg.in_degree(v), nxg.out_degree(v)) for v in nxg.nodes)
    else:
        degrees = sorted(nxg.degree(v) for v in nxg.nodes)
    return graph.n, graph.m, tuple(degrees), nx.number_of_selfloops(nxg)


def deduplicate(graphs: Iterable[GraphT]) -> list[GraphT]:
    """Keep the first representative of every isomorphism class, in input order."""
    buckets: dict[tuple, list[tuple[GraphT, nx.Graph]]] = {}
    kept: list[GraphT] = []
    for graph in graphs:
        nxg = graph.to_networkx()
        bucket = buckets.setdefault(_invariant(graph), [])
        if any(nx.is_isomorphic(nxg, other) for _, other in bucket):
            continue
        bucket.append((graph, nxg))
        kept.append(graph)
    return kept


def _grow(
    start: Sequence[GraphT], extend: Callable[[GraphT], Iterable[GraphT]], max_edges: int
) -> list[GraphT]:
    level = deduplicate(start)
    out = list(level)
    while level:
        candidates = [bigger for graph in level for bigger in extend(graph) if bigger.m <= max_edges]
        level = deduplicate(candidates)
        out.extend(level)
    return out


def connected_digraphs(
    max_vertices: int, max_edges: int, loops: bool = False, multiplicity: int = 1
) -> list[DiGraph]:
    """All weakly connected digraphs within the bounds, one per isomorphism class, with at least one edge."""

    def extend(G: DiGraph) -> Iterable[DiGraph]:
        for t in range(G.n):
            for h in range(G.n):
                if (t == h and not loops) or G.edges.count((t, h)) >= multiplicity:
                    continue
                yield DiGraph(G.n, tuple(sorted(G.edges + ((t, h),))))
        if G.n < max_vertices:
            for v in range(G.n):
                yield DiGraph(G.n + 1, tuple(sorted(G.edges + ((v, G.n),))))
                yield DiGraph(G.n + 1, tuple(sorted(G.edges + ((G.n, v),))))

    graphs = [G for G in _grow([DiGraph(1)], extend, max_edges) if G.m > 0]
    logger.debug(f"{len(graphs)} connected digraphs with <= {max_vertices} vertices and <= {max_edges} edges")
    return graphs


def eulerian_digraphs(max_vertices: int, max_edges: int) -> list[DiGraph]:
    """Connected Eulerian digraphs (loops and parallel edges allowed), grown as unions of directed cycles."""

    def cycles_through(G: DiGraph) -> Iterable[DiGraph]:
        for length in range(1, max_vertices + 1):
            pool = range(min(G.n + length, max_vertices))
            for walk in permutations(pool, length):
                new = [v for v in walk if v >= G.n]
                if len(new) == length:
                    continue
                if new and max(new) >= G.n + len(new):
                    continue
                arcs = tuple((walk[i], walk[(i + 1) % length]) for i in range(length))
                yield DiGraph(max(G.n, max(walk) + 1), tuple(sorted(G.edges + arcs)))

    return [G for G in _grow([DiGraph(1)], cycles_through, max_edges) if G.m > 0]


def bipartite_multigraphs(max_edges: int) -> list[UGraph]:
    """Connected bipartite multigraphs with at least one edge."""

    def extend(U: UGraph) -> Iterable[UGraph]:
        sides = bipartition(U)
        if sides is None:
            return
        first, second = sides
        for u in sorted(first):
            for w in sorted(second):
                yield UGraph(U.n, U.edges + ((u, w),))
        for v in range(U.n):
            yield UGraph(U.n + 1, U.edges + ((v, U.n),))

    return _grow([UGraph(2, ((0, 1),))], extend, max_edges)


def random_connected_digraph(rng: random.Random, n: int, m: int, loops: bool = False) -> DiGraph:
    """Random spanning tree with random directions plus m - n + 1 extra random edges."""
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    while len(edges) < m:
        t, h = rng.randrange(n), rng.randrange(n)
        if t != h or loops:
            edges.append((t, h))
    return DiGraph(n, tuple(edges))


def digraph_family(limit: int | None = None, max_vertices: int = 5, max_edges: int = 8) -> list[DiGraph]:
    """
    Small digraphs with loops and parallel edges first, then every simple
    connected digraph within the bounds (antiparallel pairs allowed).

    With ``limit`` the larger sources are only generated when still needed.
    """
    sources: tuple[Callable[[], list[DiGraph]], ...] = (
        lambda: connected_digraphs(3, 5, loops=True, multiplicity=2),
        lambda: connected_digraphs(4, 6, multiplicity=2),
        lambda: connected_digraphs(max_vertices, max_edges),
    )
    graphs: list[DiGraph] = []
    for build in sources:
        graphs = deduplicate(graphs + build())
        if limit is not None and len(graphs) >= limit:
            return graphs[:limit]
    logger.info(f"digraph family: {len(graphs)} instances")
    return graphs


def rooted_family(graphs: Iterable[DiGraph], spanning: bool = True) -> list[tuple[DiGraph, int]]:
    """Every (graph, root) pair where the root reaches all vertices, or with ``spanning=False`` misses some."""
    return [(G, s) for G in graphs for s in range(G.n) if connectivity_flags(G, s).s_root_connected == spanning]


def random_tu_matrix(rng: random.Random, n: int, m: int, steps: int = 3) -> OrientedRegularMatroid:
    """Incidence matrix of a random connected digraph, moved around by unit pivots."""
    return scramble(graphic_matroid(random_connected_digraph(rng, n, m)), rng, steps)
