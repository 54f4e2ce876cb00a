"""
Minimum dijoins, directed-cut packings and feedback arc sets by exhaustive search.

All searches run by increasing cardinality over edge subsets and return every
optimal witness in lexicographic order, so results are complete and reproducible.
"""

import logging
import os
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from app.digraph import (
    DiGraph,
    DirectedCut,
    connectivity_flags,
    enumerate_directed_cuts,
    enumerate_signed_cycles,
    is_acyclic,
    reachable_from,
    require_weakly_connected,
)
from app.errors import NotRootConnectedError, TooLargeError

logger = logging.getLogger(__name__)

MAX_EDGES = int(os.environ.get("APP_MAX_EDGES", "20"))


@dataclass(frozen=True)
class DijoinCertificate:
    """Optimal dijoins and their net degree vectors (or column sums for matroids)."""

    nu: int
    min_dijoins: tuple[tuple[int, ...], ...]
    net_degree_vectors: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FeedbackArcSet:
    size: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class CutPacking:
    size: int
    cuts: tuple[DirectedCut, ...]


def guard_size(m: int, max_edges: int | None = None) -> None:
    limit = MAX_EDGES if max_edges is None else max_edges
    if m > limit:
        raise TooLargeError(f"exhaustive search over {m} edges exceeds the limit of {limit} (APP_MAX_EDGES)")


def _mask(edge_ids: Iterable[int]) -> int:
    out = 0
    for i in edge_ids:
        out |= 1 << i
    return out


def _is_forest(G: DiGraph, edge_ids: Sequence[int]) -> bool:
    forest = nx.utils.UnionFind(range(G.n))
    for i in edge_ids:
        t, h = G.edges[i]
        if forest[t] == forest[h]:
            return False
        forest.union(t, h)
    return True


def is_dijoin(G: DiGraph, K: Iterable[int], elementary_only: bool = True) -> bool:
    """True iff K meets every directed cut (every elementary one by default)."""
    cuts = [cut for cut in enumerate_directed_cuts(G) if cut.elementary or not elementary_only]
    chosen = _mask(K)
    return all(_mask(cut.edges) & chosen for cut in cuts)


def min_dijoins(G: DiGraph, exhaustive: bool = False, max_edges: int | None = None) -> DijoinCertificate:
    """
    All minimum cardinality dijoins.

    The default search only visits cycle-free edge sets; ``exhaustive`` drops
    that restriction and serves as an oracle for it.
    """
    require_weakly_connected(G)
    guard_size(G.m, max_edges)
    cut_masks = [_mask(cut.edges) for cut in enumerate_directed_cuts(G) if cut.elementary]
    for size in range(G.m + 1):
        found = []
        for subset in combinations(range(G.m), size):
            if not exhaustive and not _is_forest(G, subset):
                continue
            chosen = _mask(subset)
            if all(mask & chosen for mask in cut_masks):
                found.append(subset)
        if found:
            vectors = tuple(sorted({G.net_degree_vector(K) for K in found}))
            logger.debug(f"nu = {size}: {len(found)} minimum dijoins, {len(vectors)} net degree vectors")
            return DijoinCertificate(size, tuple(found), vectors)
    raise TooLargeError("no dijoin found; the edge set itself should always be one")


def max_cut_packing(masks: Sequence[int]) -> list[int]:
    """Indices of a largest pairwise disjoint subfamily of the given edge masks."""
    best: list[int] = []
    chosen: list[int] = []

    def grow(start: int, used: int) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        for i in range(start, len(masks)):
            if len(chosen) + len(masks) - i <= len(best):
                return
            if masks[i] & used:
                continue
            chosen.append(i)
            grow(i + 1, used | masks[i])
            chosen.pop()

    grow(0, 0)
    return best


def max_disjoint_directed_cuts(G: DiGraph, max_edges: int | None = None) -> CutPacking:
    """
    Largest family of pairwise edge-disjoint directed cuts.

    Every directed cut splits into edge-disjoint elementary directed cuts, so the
    search runs over elementary cuts only.
    """
    require_weakly_connected(G)
    guard_size(G.m, max_edges)
    cuts = [cut for cut in enumerate_directed_cuts(G) if cut.elementary]
    cuts.sort(key=lambda cut: (len(cut.edges), cut.edges))
    picked = max_cut_packing([_mask(cut.edges) for cut in cuts])
    return CutPacking(len(picked), tuple(sorted((cuts[i] for i in picked), key=lambda cut: cut.edges)))


def minfas(G: DiGraph, max_edges: int | None = None) -> FeedbackArcSet:
    """Smallest edge set meeting every directed cycle."""
    guard_size(G.m, max_edges)
    for size in range(G.m + 1):
        for subset in combinations(range(G.m), size):
            if is_acyclic(G.without(subset)):
                return FeedbackArcSet(size, subset)
    raise TooLargeError("no feedback arc set found; removing every edge should always work")


def minfas_rooted(G: DiGraph, s: int, max_edges: int | None = None) -> FeedbackArcSet:
    """Smallest feedback arc set whose removal keeps every vertex reachable from s."""
    if not connectivity_flags(G, s).s_root_connected:
        raise NotRootConnectedError(f"not every vertex is reachable from the root {s}")
    guard_size(G.m, max_edges)
    for size in range(G.m + 1):
        for subset in combinations(range(G.m), size):
            rest = [i for i in range(G.m) if i not in subset]
            if len(reachable_from(G, s, rest)) == G.n and is_acyclic(G, rest):
                return FeedbackArcSet(size, subset)
    raise NotRootConnectedError(f"no s-connected feedback arc set for root {s}")


def is_long_arc_dijoin(G: DiGraph, K: Iterable[int]) -> bool:
    """True iff K contains the strictly longer side of some signed cycle."""
    chosen = set(K)
    for cycle in enumerate_signed_cycles(G):
        if len(cycle.minus) > len(cycle.plus) and cycle.minus <= chosen:
            return True
        if len(cycle.plus) > len(cycle.minus) and cycle.plus <= chosen:
            return True
    return False


def min_reversals_to_strong(G: DiGraph, max_edges: int | None = None) -> int | None:
    """Fewest edges to reverse for a strongly connected orientation; None if there is none."""
    require_weakly_connected(G)
    guard_size(G.m, max_edges)
    for size in range(G.m + 1):
        for subset in combinations(range(G.m), size):
            if nx.is_strongly_connected(G.reverse_edges(subset).to_networkx()):
                return size
    return None
