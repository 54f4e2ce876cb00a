"""
Directed multigraph model and the structural enumerations built on it.

Vertices are 0..n-1, edge identity is the position in ``edges``. Loops and
parallel edges are allowed everywhere. Graph-theoretic queries go through
networkx (``MultiDiGraph`` keyed by edge index); the exhaustive enumerations
are written out explicitly so their output order is deterministic.
"""

import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

import networkx as nx

from app.errors import DisconnectedInputError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiGraph:
    """Multidigraph with loops; edge i runs from edges[i][0] to edges[i][1]."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(t), int(h)) for t, h in self.edges))
        if self.n < 1:
            raise InputError(f"a digraph needs at least one vertex, got {self.n}", "RANGE_ERROR")
        for i, (t, h) in enumerate(self.edges):
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise InputError(f"edge {i} = ({t}, {h}) leaves the vertex range 0..{self.n - 1}", "RANGE_ERROR")

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_vector(self, i: int) -> tuple[int, ...]:
        """1_head - 1_tail; the zero vector for a loop."""
        t, h = self.edges[i]
        vec = [0] * self.n
        vec[h] += 1
        vec[t] -= 1
        return tuple(vec)

    def net_degree_vector(self, edge_ids: Iterable[int]) -> tuple[int, ...]:
        vec = [0] * self.n
        for i in edge_ids:
            t, h = self.edges[i]
            vec[h] += 1
            vec[t] -= 1
        return tuple(vec)

    def indegree(self, v: int, count_loops: bool = True) -> int:
        return sum(1 for t, h in self.edges if h == v and (count_loops or t != v))

    def outdegree(self, v: int, count_loops: bool = True) -> int:
        return sum(1 for t, h in self.edges if t == v and (count_loops or h != v))

    def is_loop(self, i: int) -> bool:
        return self.edges[i][0] == self.edges[i][1]

    def to_networkx(self, edge_ids: Iterable[int] | None = None) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.n))
        ids = range(self.m) if edge_ids is None else edge_ids
        for i in ids:
            t, h = self.edges[i]
            graph.add_edge(t, h, key=i)
        return graph

    def subgraph(self, edge_ids: Iterable[int]) -> "DiGraph":
        """Same vertex set, the chosen edges in their original relative order."""
        keep = sorted(set(edge_ids))
        return DiGraph(self.n, tuple(self.edges[i] for i in keep))

    def without(self, edge_ids: Iterable[int]) -> "DiGraph":
        drop = set(edge_ids)
        return self.subgraph(i for i in range(self.m) if i not in drop)

    def reverse_edges(self, edge_ids: Iterable[int]) -> "DiGraph":
        flip = set(edge_ids)
        return DiGraph(self.n, tuple((h, t) if i in flip else (t, h) for i, (t, h) in enumerate(self.edges)))

    def underlying(self) -> "UGraph":
        return UGraph(self.n, self.edges)


@dataclass(frozen=True)
class UGraph:
    """Undirected multigraph; edge i joins edges[i][0] and edges[i][1]."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.n < 1:
            raise InputError(f"a graph needs at least one vertex, got {self.n}", "RANGE_ERROR")
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge {i} = ({u}, {v}) leaves the vertex range 0..{self.n - 1}", "RANGE_ERROR")

    @property
    def m(self) -> int:
        return len(self.edges)

    def orient(self, bits: int) -> DiGraph:
        """Edge i keeps its listed direction iff bit i of ``bits`` is set."""
        return DiGraph(self.n, tuple((u, v) if bits >> i & 1 else (v, u) for i, (u, v) in enumerate(self.edges)))

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n))
        for i, (u, v) in enumerate(self.edges):
            graph.add_edge(u, v, key=i)
        return graph


@dataclass(frozen=True)
class ConnectivityFlags:
    weakly_connected: bool
    strongly_connected: bool
    s_root_connected: bool
    eulerian: bool


@dataclass(frozen=True)
class SignedCycle:
    """A cycle of the underlying multigraph split by traversal direction."""

    plus: frozenset[int]
    minus: frozenset[int]

    @property
    def edges(self) -> frozenset[int]:
        return self.plus | self.minus

    @property
    def is_balanced(self) -> bool:
        return len(self.plus) == len(self.minus)

    def sort_key(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))


@dataclass(frozen=True)
class DirectedCut:
    """All edges run from tail_shore to head_shore and none run back."""

    tail_shore: frozenset[int]
    head_shore: frozenset[int]
    edges: tuple[int, ...]
    elementary: bool


@dataclass(frozen=True)
class Layering:
    """Integer label per vertex, normalized to 0 at vertex 0."""

    values: tuple[int, ...]

    def rise(self, G: DiGraph, i: int) -> int:
        t, h = G.edges[i]
        return self.values[h] - self.values[t]

    def is_layering(self, G: DiGraph) -> bool:
        return all(self.rise(G, i) == 1 for i in range(G.m))

    def tight_edges(self, G: DiGraph) -> tuple[int, ...]:
        return tuple(i for i in range(G.m) if self.rise(G, i) == 1)

    def is_admissible(self, G: DiGraph) -> bool:
        if any(self.rise(G, i) > 1 for i in range(G.m)):
            return False
        return weak_component_count(G.subgraph(self.tight_edges(G))) == 1


def weak_component_count(G: DiGraph) -> int:
    return nx.number_weakly_connected_components(G.to_networkx())


def is_weakly_connected(G: DiGraph) -> bool:
    return weak_component_count(G) == 1


def require_weakly_connected(G: DiGraph) -> None:
    if not is_weakly_connected(G):
        raise DisconnectedInputError(
            f"the digraph on {G.n} vertices has {weak_component_count(G)} weak components; "
            "root polytope statements need a weakly connected graph"
        )


def reachable_from(G: DiGraph, s: int, edge_ids: Iterable[int] | None = None) -> set[int]:
    graph = G.to_networkx(edge_ids)
    return {s} | nx.descendants(graph, s)


def is_acyclic(G: DiGraph, edge_ids: Iterable[int] | None = None) -> bool:
    """No directed cycle, loops included."""
    return nx.is_directed_acyclic_graph(G.to_networkx(edge_ids))


def connectivity_flags(G: DiGraph, s: int) -> ConnectivityFlags:
    graph = G.to_networkx()
    return ConnectivityFlags(
        weakly_connected=nx.is_weakly_connected(graph),
        strongly_connected=nx.is_strongly_connected(graph),
        s_root_connected=len(nx.descendants(graph, s)) == G.n - 1,
        eulerian=all(G.indegree(v) == G.outdegree(v) for v in range(G.n)),
    )


def enumerate_directed_cuts(G: DiGraph) -> list[DirectedCut]:
    """Every distinct directed cut, found by scanning all proper vertex bipartitions."""
    require_weakly_connected(G)
    seen: dict[tuple[int, ...], DirectedCut] = {}
    for mask in range(1, (1 << G.n) - 1):
        head_shore = frozenset(v for v in range(G.n) if mask >> v & 1)
        crossing = []
        backward = False
        for i, (t, h) in enumerate(G.edges):
            if t not in head_shore and h in head_shore:
                crossing.append(i)
            elif t in head_shore and h not in head_shore:
                backward = True
                break
        if backward or not crossing:
            continue
        key = tuple(crossing)
        if key in seen:
            continue
        elementary = weak_component_count(G.without(crossing)) == 2
        seen[key] = DirectedCut(frozenset(range(G.n)) - head_shore, head_shore, key, elementary)
    cuts = sorted(seen.values(), key=lambda cut: cut.edges)
    logger.debug(f"found {len(cuts)} directed cuts on {G.n} vertices")
    return cuts


def _incidence(G: DiGraph) -> list[list[tuple[int, int, bool]]]:
    """Per vertex: (edge, other end, True if leaving this vertex follows the edge direction)."""
    adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(G.n)]
    for i, (t, h) in enumerate(G.edges):
        if t == h:
            continue
        adj[t].append((i, h, True))
        adj[h].append((i, t, False))
    return adj


def _canonical_cycle(steps: Sequence[tuple[int, bool]]) -> SignedCycle:
    plus = frozenset(e for e, forward in steps if forward)
    minus = frozenset(e for e, forward in steps if not forward)
    if min(plus | minus) in minus:
        plus, minus = minus, plus
    return SignedCycle(plus, minus)


def enumerate_signed_cycles(G: DiGraph) -> list[SignedCycle]:
    """All cycles of the underlying multigraph, lowest edge index in the plus part."""
    found: dict[frozenset[int], SignedCycle] = {}
    for i in range(G.m):
        if G.is_loop(i):
            found[frozenset({i})] = SignedCycle(frozenset({i}), frozenset())
    adj = _incidence(G)

    def extend(start: int, v: int, steps: list[tuple[int, bool]], used: set[int], visited: set[int]) -> None:
        for e, w, forward in adj[v]:
            if e in used:
                continue
            if w == start:
                cycle = steps + [(e, forward)]
                key = frozenset(edge for edge, _ in cycle)
                if key not in found:
                    found[key] = _canonical_cycle(cycle)
            elif w > start and w not in visited:
                steps.append((e, forward))
                used.add(e)
                visited.add(w)
                extend(start, w, steps, used, visited)
                visited.discard(w)
                used.discard(e)
                steps.pop()

    for start in range(G.n):
        extend(start, start, [], set(), {start})
    return sorted(found.values(), key=SignedCycle.sort_key)


def enumerate_spanning_arborescences(G: DiGraph, s: int) -> list[tuple[int, ...]]:
    """Edge sets of all spanning arborescences rooted at s, sorted lexicographically."""
    others = [v for v in range(G.n) if v != s]
    choices = [[i for i, (t, h) in enumerate(G.edges) if h == v and t != v] for v in others]
    if any(not options for options in choices):
        return []
    found = []
    for pick in product(*choices):
        if len(reachable_from(G, s, pick)) == G.n:
            found.append(tuple(sorted(pick)))
    return sorted(found)


def find_layering(G: DiGraph) -> Layering | None:
    """A labelling rising by exactly one along every edge, if the graph is semi-balanced."""
    require_weakly_connected(G)
    values: list[int | None] = [None] * G.n
    values[0] = 0
    queue = deque([0])
    adj = _incidence(G)
    while queue:
        v = queue.popleft()
        for _, w, forward in adj[v]:
            if values[w] is None:
                values[w] = values[v] + (1 if forward else -1)
                queue.append(w)
    layering = Layering(tuple(int(x) for x in values))  # type: ignore[arg-type]
    return layering if layering.is_layering(G) else None


def enumerate_orientations(U: UGraph) -> Iterator[DiGraph]:
    """All 2^m orientations; edge i forward iff bit i is set."""
    for bits in range(1 << U.m):
        yield U.orient(bits)


def enumerate_spanning_trees(G: DiGraph) -> Iterator[tuple[int, ...]]:
    """Spanning trees of the underlying multigraph as sorted edge-index tuples."""
    candidates = [i for i in range(G.m) if not G.is_loop(i)]
    for tree in combinations(candidates, G.n - 1):
        forest = nx.utils.UnionFind(range(G.n))
        ok = True
        for i in tree:
            t, h = G.edges[i]
            if forest[t] == forest[h]:
                ok = False
                break
            forest.union(t, h)
        if ok:
            yield tree


def layering_from_tree(G: DiGraph, tree: Sequence[int]) -> Layering:
    """The labelling that rises by exactly one along every tree edge."""
    values = [0] * G.n
    seen = {0}
    adj = _incidence(G.subgraph(tree))
    order = deque([0])
    while order:
        v = order.popleft()
        for _, w, forward in adj[v]:
            if w not in seen:
                values[w] = values[v] + (1 if forward else -1)
                seen.add(w)
                order.append(w)
    return Layering(tuple(values))


def enumerate_admissible_layerings(G: DiGraph) -> list[Layering]:
    """Admissible layerings normalized at vertex 0, built from spanning trees of tight edges."""
    require_weakly_connected(G)
    found = set()
    for tree in enumerate_spanning_trees(G):
        layering = layering_from_tree(G, tree)
        if layering.values not in found and all(layering.rise(G, i) <= 1 for i in range(G.m)):
            found.add(layering.values)
    return [Layering(values) for values in sorted(found)]


def bridges(G: DiGraph) -> tuple[int, ...]:
    """Edges whose removal increases the number of weak components."""
    base = weak_component_count(G)
    return tuple(i for i in range(G.m) if not G.is_loop(i) and weak_component_count(G.without([i])) > base)


def is_two_edge_connected(G: DiGraph) -> bool:
    return is_weakly_connected(G) and not bridges(G)


def fundamental_cycle(G: DiGraph, tree: Iterable[int], e: int) -> list[tuple[int, bool]]:
    """
    Walk e from tail to head, then the tree path back to tail(e).

    Each step is (edge, True if traversed from its tail to its head).
    """
    t, h = G.edges[e]
    steps = [(e, True)]
    if t == h:
        return steps
    adj = _incidence(G.subgraph(tree))
    tree_ids = sorted(set(tree))
    parent: dict[int, tuple[int, int, bool]] = {}
    seen = {h}
    queue = deque([h])
    while queue and t not in seen:
        v = queue.popleft()
        for local, w, forward in adj[v]:
            if w not in seen:
                seen.add(w)
                parent[w] = (v, tree_ids[local], forward)
                queue.append(w)
    if t not in seen:
        raise InputError(f"edge {e} has no fundamental cycle: the tree does not join its ends", "RANGE_ERROR")
    path = []
    v = t
    while v != h:
        u, edge, forward = parent[v]
        path.append((edge, forward))
        v = u
    steps.extend(reversed(path))
    return steps


def bipartition(U: UGraph) -> tuple[frozenset[int], frozenset[int]] | None:
    """Colour classes with vertex 0 on the first side, or None if not bipartite."""
    graph = nx.Graph(U.to_networkx())
    if not nx.is_bipartite(graph):
        return None
    colour = nx.bipartite.color(graph)
    first = frozenset(v for v in range(U.n) if colour[v] == colour[0])
    return first, frozenset(range(U.n)) - first


def standard_orientation(U: UGraph) -> DiGraph | None:
    """Every edge directed from the colour class of vertex 0 to the other class."""
    sides = bipartition(U)
    if sides is None:
        return None
    first, _ = sides
    return DiGraph(U.n, tuple((u, v) if u in first else (v, u) for u, v in U.edges))
