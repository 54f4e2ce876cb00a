"""
Extended root polytopes: exact facets, lattice-point counts in dilates and h*-polynomials.

A polytope is the convex hull of integer generators. It is translated so its
first generator sits at the origin and projected onto a coordinate basis of
its affine hull; when the remaining coordinates are integral combinations of
the kept ones (true for every totally unimodular source) the projection is a
lattice isomorphism, so all counting happens in Z^d.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterator, Sequence

from app.algebra import Polynomial, RatMatrix, det_int, mat_rank, solve_rational
from app.digraph import (
    DiGraph,
    DirectedCut,
    Layering,
    enumerate_admissible_layerings,
    enumerate_directed_cuts,
    require_weakly_connected,
)
from app.errors import AlgebraError, CheckFailure, PolytopeError

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


class CountMode(StrEnum):
    CLOSED = "closed"
    INTERIOR = "interior"


class FacetKind(StrEnum):
    CUT = "cut"
    LAYERING = "layering"


@dataclass(frozen=True)
class Facet:
    """The face where normal . x = offset, with normal . x <= offset valid on the polytope."""

    normal: Vector
    offset: int
    projected_normal: Vector
    projected_offset: int
    support: tuple[int, ...]

    @property
    def kind(self) -> FacetKind:
        return FacetKind.CUT if self.offset == 0 else FacetKind.LAYERING


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _cofactor_normal(rows: Sequence[Vector], dim: int) -> Vector:
    """Vector orthogonal to the d-1 given rows (generalized cross product)."""
    normal = []
    for k in range(dim):
        minor = [[row[j] for j in range(dim) if j != k] for row in rows]
        normal.append((-1) ** k * det_int(minor))
    return tuple(normal)


@dataclass(frozen=True)
class RootPolytope:
    """
    conv(generators) with exact geometry.

    ``generators`` are the distinct input points in first-seen order; ``sources``
    keeps the input list including duplicates (parallel edges, loops).
    """

    ambient: int
    generators: tuple[Vector, ...]
    sources: tuple[Vector, ...]
    basis_coordinates: tuple[int, ...]
    lift: tuple[tuple[Fraction, ...], ...]
    projected: tuple[Vector, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis_coordinates)

    @property
    def origin(self) -> Vector:
        return self.generators[0]

    @property
    def contains_zero_generator(self) -> bool:
        return any(not any(g) for g in self.generators)

    @property
    def integral_projection(self) -> bool:
        return all(x.denominator == 1 for row in self.lift for x in row)

    def lift_point(self, y: Sequence[int], k: int = 1) -> Vector:
        """Ambient point of k*P whose projected translate is y."""
        return tuple(int(k * o + sum(c * v for c, v in zip(row, y))) for o, row in zip(self.origin, self.lift))

    @cached_property
    def facet_list(self) -> tuple[Facet, ...]:
        d = self.dim
        if d == 0:
            return ()
        points = self.projected
        found: dict[tuple[Vector, int], Facet] = {}
        for subset in combinations(range(len(points)), d):
            base = points[subset[0]]
            rows = [tuple(p - q for p, q in zip(points[i], base)) for i in subset[1:]]
            normal = _cofactor_normal(rows, d)
            if not any(normal):
                continue
            offset = _dot(normal, base)
            values = [_dot(normal, p) for p in points]
            if all(v <= offset for v in values):
                pass
            elif all(v >= offset for v in values):
                normal = tuple(-x for x in normal)
                offset = -offset
            else:
                continue
            g = math.gcd(*normal)
            normal = tuple(x // g for x in normal)
            offset //= g
            if (normal, offset) in found:
                continue
            support = tuple(i for i, p in enumerate(points) if _dot(normal, p) == offset)
            ambient_normal = [0] * self.ambient
            for coord, value in zip(self.basis_coordinates, normal):
                ambient_normal[coord] = value
            ambient_offset = offset + _dot(ambient_normal, self.origin)
            found[(normal, offset)] = Facet(tuple(ambient_normal), ambient_offset, normal, offset, support)
        facets = tuple(sorted(found.values(), key=lambda f: (f.offset, f.normal)))
        logger.debug(f"polytope of dimension {d} with {len(points)} generators has {len(facets)} facets")
        return facets

    def contains(self, x: Sequence[int], k: int = 1) -> bool:
        """Membership of an integer point in k*P."""
        y = [x[c] - k * self.origin[c] for c in self.basis_coordinates]
        if tuple(x) != self.lift_point(y, k):
            return False
        return all(_dot(f.projected_normal, y) <= k * f.projected_offset for f in self.facet_list)


def build_polytope(generators: Sequence[Sequence[int]]) -> RootPolytope:
    """Convex hull of the generators; the first one anchors the translation."""
    if not generators:
        raise PolytopeError("a polytope needs at least one generator", "DEGENERATE_DIMENSION")
    sources = tuple(tuple(int(x) for x in g) for g in generators)
    ambient = len(sources[0])
    distinct = tuple(dict.fromkeys(sources))
    origin = distinct[0]
    diffs = [tuple(p - o for p, o in zip(g, origin)) for g in distinct]
    coordinate_rows = [tuple(diff[c] for diff in diffs) for c in range(ambient)]

    basis: list[int] = []
    for c in reversed(range(ambient)):
        candidate = basis + [c]
        if mat_rank(RatMatrix.from_rows([coordinate_rows[i] for i in candidate])) == len(candidate):
            basis = candidate
    basis.sort()

    lift: list[tuple[Fraction, ...]] = []
    if basis:
        kept = RatMatrix.from_rows([coordinate_rows[i] for i in basis]).transpose()
        for c in range(ambient):
            if c in basis:
                lift.append(tuple(Fraction(int(b == c)) for b in basis))
                continue
            solution = solve_rational(kept, coordinate_rows[c])
            if solution is None:
                raise AlgebraError(f"coordinate {c} is not in the span of the basis coordinates", "SHAPE_MISMATCH")
            lift.append(solution)
    else:
        lift = [() for _ in range(ambient)]
    projected = tuple(tuple(diff[c] for c in basis) for diff in diffs)
    return RootPolytope(ambient, distinct, sources, tuple(basis), tuple(lift), projected)


def polytope_of(G: DiGraph) -> RootPolytope:
    """The extended root polytope conv({0} u {x_e})."""
    return build_polytope([(0,) * G.n] + [G.edge_vector(i) for i in range(G.m)])


def root_polytope(G: DiGraph) -> RootPolytope:
    """The root polytope conv{x_e} without the added origin."""
    if G.m == 0:
        raise PolytopeError("the root polytope of an edgeless graph is empty", "DEGENERATE_DIMENSION")
    return build_polytope([G.edge_vector(i) for i in range(G.m)])


def facets(P: RootPolytope) -> tuple[Facet, ...]:
    if P.dim == 0:
        raise PolytopeError("a point has no facets", "DEGENERATE_DIMENSION")
    return P.facet_list


def _lattice_points(P: RootPolytope, k: int, strict: bool) -> Iterator[Vector]:
    """Projected integer points of k*P (relative interior if strict)."""
    if not P.integral_projection:
        raise AlgebraError(
            "projection onto the affine hull is not lattice preserving; the generators are not unimodular",
            "NONUNIMODULAR_HULL",
        )
    d = P.dim
    if d == 0:
        yield ()
        return
    lows = [k * min(p[i] for p in P.projected) for i in range(d)]
    highs = [k * max(p[i] for p in P.projected) for i in range(d)]
    rules = [(f.projected_normal, k * f.projected_offset - (1 if strict else 0)) for f in P.facet_list]
    # suffix[j][i]: least value facet j's terms i.. can still take
    suffix = []
    for normal, _ in rules:
        tail = [0] * (d + 1)
        for i in reversed(range(d)):
            tail[i] = tail[i + 1] + min(normal[i] * lows[i], normal[i] * highs[i])
        suffix.append(tail)

    point = [0] * d
    partial = [0] * len(rules)

    def descend(i: int) -> Iterator[Vector]:
        lo, hi = lows[i], highs[i]
        for j, (normal, rhs) in enumerate(rules):
            slack = rhs - partial[j] - suffix[j][i + 1]
            a = normal[i]
            if a > 0:
                hi = min(hi, slack // a)
            elif a < 0:
                lo = max(lo, -(slack // -a))
            elif slack < 0:
                return
        for value in range(lo, hi + 1):
            point[i] = value
            for j, (normal, _) in enumerate(rules):
                partial[j] += normal[i] * value
            if i + 1 == d:
                if all(partial[j] <= rhs for j, (_, rhs) in enumerate(rules)):
                    yield tuple(point)
            else:
                yield from descend(i + 1)
            for j, (normal, _) in enumerate(rules):
                partial[j] -= normal[i] * value

    yield from descend(0)


def lattice_count(P: RootPolytope, k: int, mode: CountMode = CountMode.CLOSED) -> int:
    """Number of lattice points in k*P, or in its relative interior."""
    if k < 0:
        raise PolytopeError(f"dilation factor must be nonnegative, got {k}", "RANGE_ERROR")
    if k == 0:
        return 1 if mode == CountMode.CLOSED or P.dim == 0 else 0
    return sum(1 for _ in _lattice_points(P, k, mode == CountMode.INTERIOR))


def interior_points(P: RootPolytope, k: int) -> list[Vector]:
    """Ambient lattice points in the relative interior of k*P, sorted."""
    if k == 0:
        return [tuple([0] * P.ambient)] if P.dim == 0 else []
    return sorted(P.lift_point(y, k) for y in _lattice_points(P, k, True))


def hstar(P: RootPolytope) -> Polynomial:
    """h*-polynomial from the Ehrhart counts L(0..d) in the binomial basis."""
    d = P.dim
    counts = [lattice_count(P, k) for k in range(d + 1)]
    logger.debug(f"Ehrhart counts for dimension {d}: {counts}")
    system = RatMatrix.from_rows([[math.comb(k + d - i, d) for i in range(d + 1)] for k in range(d + 1)])
    solution = solve_rational(system, counts)
    if solution is None:
        raise PolytopeError("Ehrhart interpolation system is inconsistent", "NONINTEGRAL_HSTAR")
    if any(h.denominator != 1 or h < 0 for h in solution) or solution[0] != 1:
        raise PolytopeError(f"h* coefficients {[str(h) for h in solution]} are not a valid h*-vector", "NONINTEGRAL_HSTAR")
    return Polynomial(tuple(int(h) for h in solution))


def first_interior_dilate(P: RootPolytope) -> int:
    """Smallest k >= 1 whose dilate has a relative interior lattice point."""
    if P.dim == 0:
        raise PolytopeError("a point has no proper relative interior", "DEGENERATE_DIMENSION")
    for k in range(1, P.dim + 2):
        if next(_lattice_points(P, k, True), None) is not None:
            return k
    raise CheckFailure(f"no interior lattice point up to dilate {P.dim + 1}", "THEOREM_VIOLATION")


def interior_polynomial(G: DiGraph) -> Polynomial:
    require_weakly_connected(G)
    return hstar(polytope_of(G))


def root_polytope_hstar(G: DiGraph) -> Polynomial:
    """h* of the root polytope without the origin added."""
    require_weakly_connected(G)
    return hstar(root_polytope(G))


@lru_cache(maxsize=4096)
def _simplices(points: tuple[Vector, ...]) -> tuple[tuple[Vector, ...], ...]:
    """Cone from the first point over every facet avoiding it, recursively."""
    poly = build_polytope(points)
    if poly.dim == 0:
        return ((points[0],),)
    apex = poly.generators[0]
    out = []
    for facet in poly.facet_list:
        if 0 in facet.support:
            continue
        face = tuple(sorted(poly.generators[i] for i in facet.support))
        out.extend((apex,) + simplex for simplex in _simplices(face))
    return tuple(out)


def normalized_volume(P: RootPolytope) -> int:
    """Lattice-normalized volume from a brute-force simplicial decomposition."""
    if P.dim == 0:
        return 1
    if not P.integral_projection:
        raise AlgebraError("normalized volume needs a lattice preserving projection", "NONUNIMODULAR_HULL")
    total = 0
    for simplex in _simplices(tuple(sorted(P.projected))):
        base = simplex[0]
        total += abs(det_int([[p - q for p, q in zip(vertex, base)] for vertex in simplex[1:]]))
    return total


@dataclass(frozen=True)
class FacetClassification:
    cut_facets: tuple[tuple[Facet, DirectedCut], ...]
    layering_facets: tuple[tuple[Facet, Layering], ...]


def classify_facets(P: RootPolytope, source: DiGraph) -> FacetClassification:
    """
    Match facets through the origin with elementary directed cuts and the others with admissible layerings.

    Raises CheckFailure (CLASSIFICATION_MISMATCH) if either correspondence fails.
    """
    require_weakly_connected(source)
    if P.dim == 0:
        # single vertex: a point, nothing to match
        return FacetClassification((), ())
    elementary = {cut.edges: cut for cut in enumerate_directed_cuts(source) if cut.elementary}
    admissible = {layering.values: layering for layering in enumerate_admissible_layerings(source)}
    cut_matches: list[tuple[Facet, DirectedCut]] = []
    layering_matches: list[tuple[Facet, Layering]] = []
    for facet in facets(P):
        values = [_dot(facet.normal, source.edge_vector(i)) for i in range(source.m)]
        if facet.kind == FacetKind.CUT:
            off = tuple(i for i, v in enumerate(values) if v != 0)
            if any(v not in (0, -1) for v in values) or off not in elementary:
                raise CheckFailure(
                    f"facet through the origin with normal {facet.normal} leaves edges {off}, "
                    "which is not an elementary directed cut",
                    "CLASSIFICATION_MISMATCH",
                )
            cut_matches.append((facet, elementary[off]))
        else:
            shift = facet.normal[0]
            labels = tuple(x - shift for x in facet.normal)
            if facet.offset != 1 or labels not in admissible:
                raise CheckFailure(
                    f"facet {facet.normal} . x <= {facet.offset} is not an admissible layering facet",
                    "CLASSIFICATION_MISMATCH",
                )
            layering_matches.append((facet, admissible[labels]))
    if len(cut_matches) != len(elementary) or len(layering_matches) != len(admissible):
        raise CheckFailure(
            f"{len(cut_matches)} cut facets for {len(elementary)} elementary directed cuts and "
            f"{len(layering_matches)} layering facets for {len(admissible)} admissible layerings",
            "CLASSIFICATION_MISMATCH",
        )
    return FacetClassification(tuple(cut_matches), tuple(layering_matches))


def forest_lattice_count(edge_count: int, k: int) -> int:
    """Lattice points of k times a unimodular simplex spanned by the origin and edge_count vectors."""
    return math.comb(k + edge_count, edge_count)
