"""
Greedoids given by feasibility oracles, branching greedoids of rooted digraphs,
and the greedoid polynomial built from lexicographic external activity.
"""

import logging
import os
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Callable, Iterable, Sequence

from app.algebra import Polynomial
from app.digraph import DiGraph, enumerate_spanning_arborescences, fundamental_cycle, reachable_from
from app.errors import CheckFailure, GreedoidError

logger = logging.getLogger(__name__)

VERIFY_LIMIT = int(os.environ.get("APP_GREEDOID_VERIFY_LIMIT", "12"))

Word = tuple[int, ...]


class Greedoid:
    """Ground set plus a memoized feasibility oracle."""

    def __init__(self, ground: Iterable[int], oracle: Callable[[frozenset[int]], bool], verify: bool | None = None):
        self.ground: tuple[int, ...] = tuple(sorted(set(ground)))
        self._oracle = oracle
        self._memo: dict[frozenset[int], bool] = {}
        if not self.is_feasible(frozenset()):
            raise GreedoidError("the empty set must be feasible", "NO_BASIS")
        if verify is None:
            verify = len(self.ground) <= VERIFY_LIMIT
            if not verify:
                logger.warning(f"greedoid axioms not verified on {len(self.ground)} elements (limit {VERIFY_LIMIT})")
        if verify:
            self.verify_axioms()

    def is_feasible(self, subset: Iterable[int]) -> bool:
        key = frozenset(subset)
        if key not in self._memo:
            self._memo[key] = key <= set(self.ground) and self._oracle(key)
        return self._memo[key]

    @cached_property
    def feasible_sets(self) -> tuple[frozenset[int], ...]:
        """All feasible sets, grown one element at a time from the empty set."""
        layer = {frozenset()}
        found = [frozenset()]
        while layer:
            nxt = set()
            for current in layer:
                for x in self.ground:
                    if x not in current and self.is_feasible(current | {x}):
                        nxt.add(current | {x})
            found.extend(sorted(nxt, key=sorted))
            layer = nxt
        return tuple(found)

    @cached_property
    def bases(self) -> tuple[frozenset[int], ...]:
        feasible = set(self.feasible_sets)
        maximal = [
            f for f in self.feasible_sets if not any(x not in f and (f | {x}) in feasible for x in self.ground)
        ]
        if len({len(b) for b in maximal}) > 1:
            raise GreedoidError(f"bases of sizes {sorted({len(b) for b in maximal})} found", "GREEDOID_AXIOM")
        return tuple(sorted(maximal, key=sorted))

    @property
    def rank(self) -> int:
        return len(self.bases[0])

    def verify_axioms(self) -> None:
        """Accessibility and exchange over every subset of the ground set."""
        everything = [frozenset(c) for k in range(len(self.ground) + 1) for c in combinations(self.ground, k)]
        feasible = [s for s in everything if self.is_feasible(s)]
        for s in feasible:
            if s and not any(self.is_feasible(s - {x}) for x in s):
                raise GreedoidError(f"feasible set {sorted(s)} is not accessible", "GREEDOID_AXIOM")
        by_size: dict[int, list[frozenset[int]]] = {}
        for s in feasible:
            by_size.setdefault(len(s), []).append(s)
        for size, smaller in by_size.items():
            for y in smaller:
                for x_set in by_size.get(size + 1, []):
                    if not any(self.is_feasible(y | {x}) for x in x_set - y):
                        raise GreedoidError(f"exchange fails for {sorted(x_set)} and {sorted(y)}", "GREEDOID_AXIOM")

    @cached_property
    def basis_set(self) -> frozenset[frozenset[int]]:
        return frozenset(self.bases)

    def require_basis(self, B: Iterable[int]) -> frozenset[int]:
        basis = frozenset(B)
        if basis not in self.basis_set:
            raise GreedoidError(f"{sorted(basis)} is not a basis", "NOT_A_BASIS")
        return basis


class BranchingGreedoid(Greedoid):
    """Feasible sets are the arborescences rooted at ``root``."""

    def __init__(self, digraph: DiGraph, root: int, verify: bool | None = None):
        self.digraph = digraph
        self.root = root
        super().__init__(range(digraph.m), self._is_branching, verify)

    def _is_branching(self, subset: frozenset[int]) -> bool:
        heads = [self.digraph.edges[i][1] for i in subset]
        if self.root in heads or len(set(heads)) != len(heads):
            return False
        return set(heads) <= reachable_from(self.digraph, self.root, subset)


def restriction(X: Greedoid, S: Iterable[int], verify: bool = False) -> Greedoid:
    """Feasible sets of X contained in S."""
    keep = frozenset(S) & frozenset(X.ground)

    def oracle(subset: frozenset[int]) -> bool:
        return subset <= keep and X.is_feasible(subset)

    return Greedoid(keep, oracle, verify)


def _positions(X: Greedoid, order: Sequence[int] | None) -> dict[int, int]:
    sequence = list(order) if order is not None else list(X.ground)
    positions = {x: i for i, x in enumerate(sequence)}
    if any(x not in positions for x in X.ground):
        raise GreedoidError(f"order {sequence} does not rank every element of {list(X.ground)}", "RANGE_ERROR")
    return positions


def _word_key(word: Word, positions: dict[int, int]) -> tuple[int, ...]:
    return tuple(positions[x] for x in word)


def lexmin_feasible_word(X: Greedoid, B: Iterable[int], order: Sequence[int] | None = None) -> Word:
    """Lexicographically smallest ordering of B whose prefixes are all feasible."""
    basis = X.require_basis(B)
    positions = _positions(X, order)
    word: list[int] = []
    current: frozenset[int] = frozenset()
    while current != basis:
        options = [x for x in basis - current if X.is_feasible(current | {x})]
        if not options:
            raise GreedoidError(f"no feasible extension of {word} inside {sorted(basis)}", "GREEDOID_AXIOM")
        pick = min(options, key=positions.__getitem__)
        word.append(pick)
        current = current | {pick}
    return tuple(word)


def lexmin_word_bruteforce(X: Greedoid, B: Iterable[int], order: Sequence[int] | None = None) -> Word:
    """Same as lexmin_feasible_word, by scanning every permutation of B."""
    basis = X.require_basis(B)
    positions = _positions(X, order)
    words = [
        w for w in permutations(sorted(basis)) if all(X.is_feasible(w[:k]) for k in range(1, len(w) + 1))
    ]
    return min(words, key=lambda w: _word_key(w, positions))


@dataclass(frozen=True)
class Activity:
    count: int
    active: tuple[int, ...]


def external_activity(X: Greedoid, B: Iterable[int], order: Sequence[int] | None = None) -> Activity:
    """
    e outside B is active iff every basis B - f + e has a larger lexmin word than B.

    With no such exchange the condition holds vacuously.
    """
    basis = X.require_basis(B)
    positions = _positions(X, order)
    own = _word_key(lexmin_feasible_word(X, basis, order), positions)
    active = []
    for e in X.ground:
        if e in basis:
            continue
        ok = True
        for f in basis:
            other = (basis - {f}) | {e}
            if X.is_feasible(other) and _word_key(lexmin_feasible_word(X, other, order), positions) < own:
                ok = False
                break
        if ok:
            active.append(e)
    return Activity(len(active), tuple(active))


def _activity_polynomial(X: Greedoid, order: Sequence[int] | None) -> Polynomial:
    return Polynomial.from_exponents(external_activity(X, b, order).count for b in X.bases)


def greedoid_polynomial(
    X: Greedoid, order: Sequence[int] | None = None, check_orders: int = 3, seed: int = 0
) -> Polynomial:
    """
    Sum of t^e(B) over bases under ``order``.

    The result is recomputed under ``check_orders`` seeded random orders and must not change.
    """
    if not X.bases:
        raise GreedoidError("the greedoid has no basis", "NO_BASIS")
    result = _activity_polynomial(X, order)
    rng = random.Random(seed)
    for _ in range(check_orders):
        shuffled = list(X.ground)
        rng.shuffle(shuffled)
        again = _activity_polynomial(X, shuffled)
        if again != result:
            raise CheckFailure(
                f"greedoid polynomial {result.as_list()} changed to {again.as_list()} under order {shuffled}",
                "THEOREM_VIOLATION",
            )
    return result


def semi_active_edges(G: DiGraph, s: int, A: Iterable[int], order: Sequence[int] | None = None) -> tuple[int, ...]:
    """Edges outside A whose fundamental cycle has its order-maximal edge pointing the same way."""
    tree = tuple(sorted(set(A)))
    X = BranchingGreedoid(G, s, verify=False)
    if len(tree) != G.n - 1 or not X.is_feasible(tree):
        raise GreedoidError(f"{list(tree)} is not a spanning arborescence rooted at {s}", "NOT_AN_ARBORESCENCE")
    return _semi_active(G, tree, _edge_positions(G, order))


def _edge_positions(G: DiGraph, order: Sequence[int] | None) -> dict[int, int]:
    sequence = list(order) if order is not None else list(range(G.m))
    return {x: i for i, x in enumerate(sequence)}


def _semi_active(G: DiGraph, tree: tuple[int, ...], positions: dict[int, int]) -> tuple[int, ...]:
    out = []
    for e in range(G.m):
        if e in tree:
            continue
        cycle = fundamental_cycle(G, tree, e)
        _, forward = max(cycle, key=lambda step: positions[step[0]])
        if forward:
            out.append(e)
    return tuple(out)


def semi_activity_polynomial(G: DiGraph, s: int, order: Sequence[int] | None = None) -> Polynomial:
    positions = _edge_positions(G, order)
    return Polynomial.from_exponents(
        len(_semi_active(G, A, positions)) for A in enumerate_spanning_arborescences(G, s)
    )


def semi_activity_discrepancies(
    G: DiGraph, s: int, order: Sequence[int] | None = None
) -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """Arborescences whose semi-active set differs from their greedoid-active set."""
    X = BranchingGreedoid(G, s, verify=False)
    positions = _edge_positions(G, order)
    found = []
    for A in enumerate_spanning_arborescences(G, s):
        semi = _semi_active(G, A, positions)
        greedy = external_activity(X, A, order).active
        if semi != greedy:
            found.append((A, semi, greedy))
    if found:
        logger.warning(f"{len(found)} arborescences differ between semi-activity and greedoid activity")
    return found


def min_restriction_k(X: Greedoid, order: Sequence[int] | None = None) -> int:
    """
    Fewest elements to delete so the rank survives and the polynomial gains a constant term.

    Must equal the lowest exponent of the greedoid polynomial.
    """
    if not X.bases:
        raise GreedoidError("the greedoid has no basis", "NO_BASIS")
    rank = X.rank
    for size in range(len(X.ground) + 1):
        for removed in combinations(X.ground, size):
            rest = [x for x in X.ground if x not in removed]
            Y = restriction(X, rest)
            if Y.rank != rank:
                continue
            sub_order = [x for x in order if x in Y.ground] if order is not None else None
            if _activity_polynomial(Y, sub_order).coefficient(0) != 0:
                lowest = _activity_polynomial(X, order).lowest_exponent()
                if lowest != size:
                    raise CheckFailure(
                        f"restriction needs {size} deletions but the lowest exponent is {lowest}",
                        "THEOREM_VIOLATION",
                    )
                return size
    raise GreedoidError("no restriction keeps the rank", "NO_BASIS")
