"""
Oriented regular matroids represented by totally unimodular integer matrices.
"""

import logging
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from app.algebra import Polynomial, RatMatrix, det_int, kernel_vector_on_support, mat_rank, rref, solve_rational
from app.digraph import DiGraph
from app.dijoin import DijoinCertificate, guard_size
from app.errors import AlgebraError, CheckFailure, InputError, TooLargeError
from app.polytope import FacetKind, RootPolytope, build_polytope, hstar

logger = logging.getLogger(__name__)

TU_CHECK_LIMIT = int(os.environ.get("APP_TU_CHECK_LIMIT", "8"))


@dataclass(frozen=True)
class TUResult:
    ok: bool
    witness_rows: tuple[int, ...] = ()
    witness_cols: tuple[int, ...] = ()
    determinant: int | None = None


def is_totally_unimodular(rows: Sequence[Sequence[int]], limit: int | None = None) -> TUResult:
    """Check every square subdeterminant; report the first violating submatrix."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    for i in range(n):
        for j in range(m):
            if rows[i][j] not in (-1, 0, 1):
                return TUResult(False, (i,), (j,), rows[i][j])
    cap = TU_CHECK_LIMIT if limit is None else limit
    if min(n, m) > cap:
        raise TooLargeError(f"exhaustive unimodularity test on a {n}x{m} matrix exceeds size {cap}")
    for k in range(2, min(n, m) + 1):
        for row_set in combinations(range(n), k):
            for col_set in combinations(range(m), k):
                det = det_int([[rows[i][j] for j in col_set] for i in row_set])
                if det not in (-1, 0, 1):
                    return TUResult(False, row_set, col_set, det)
    return TUResult(True)


@dataclass(frozen=True)
class OrientedRegularMatroid:
    """Ground set = column indices of a totally unimodular matrix."""

    matrix: tuple[tuple[int, ...], ...]
    size: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], trust: bool = False) -> "OrientedRegularMatroid":
        width = len(rows[0]) if rows else 0
        if any(len(row) != width for row in rows):
            raise InputError("matrix rows have different lengths", "PARSE_ERROR")
        matrix = tuple(tuple(int(x) for x in row) for row in rows)
        if not trust:
            result = is_totally_unimodular(matrix)
            if not result.ok:
                raise AlgebraError(
                    f"rows {result.witness_rows}, columns {result.witness_cols} have determinant "
                    f"{result.determinant}; the matrix is not totally unimodular",
                    "NON_TU_MATRIX",
                )
        return cls(matrix, width)

    @property
    def row_count(self) -> int:
        return len(self.matrix)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.matrix)

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.column(j) for j in range(self.size))

    @cached_property
    def as_rational(self) -> RatMatrix:
        return RatMatrix.from_rows(self.matrix, self.size)

    @cached_property
    def rank(self) -> int:
        return mat_rank(self.as_rational) if self.matrix else 0

    def subset_rank(self, subset: Sequence[int]) -> int:
        if not subset or not self.matrix:
            return 0
        return mat_rank(self.as_rational.select_columns(list(subset)))

    def polytope(self) -> RootPolytope:
        return build_polytope([(0,) * self.row_count] + list(self.columns))


@dataclass(frozen=True)
class SignedCircuit:
    vector: tuple[int, ...]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.vector) if x != 0)

    @property
    def plus(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.vector) if x > 0)

    @property
    def minus(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.vector) if x < 0)


@dataclass(frozen=True)
class SignedCocircuit(SignedCircuit):
    """Values h(a_k) of a functional vanishing on a hyperplane spanned by columns."""

    @property
    def directed(self) -> bool:
        return not self.minus


def signed_circuits(M: OrientedRegularMatroid) -> list[SignedCircuit]:
    """Minimal dependent column sets with their {0,+1,-1} relations."""
    if not M.matrix:
        return [SignedCircuit(tuple(1 if i == j else 0 for i in range(M.size))) for j in range(M.size)]
    found = []
    for size in range(1, min(M.size, M.rank + 1) + 1):
        for support in combinations(range(M.size), size):
            vector = kernel_vector_on_support(M.as_rational, support)
            if vector is not None:
                found.append(SignedCircuit(vector))
    return sorted(found, key=lambda c: c.support)


def signed_cocircuits(M: OrientedRegularMatroid) -> list[SignedCocircuit]:
    """Complements of hyperplanes spanned by columns, signed by the functional vanishing there."""
    r = M.rank
    if r == 0:
        return []
    found: dict[tuple[int, ...], SignedCocircuit] = {}
    for base in combinations(range(M.size), r - 1):
        if M.subset_rank(base) != r - 1:
            continue
        flat = [j for j in range(M.size) if j in base or M.subset_rank(base + (j,)) == r - 1]
        support = tuple(j for j in range(M.size) if j not in flat)
        if support in found:
            continue
        pivot = support[0]
        system = RatMatrix.from_columns([M.column(j) for j in base + (pivot,)], M.row_count)
        values = []
        for k in range(M.size):
            solution = solve_rational(system, M.column(k))
            if solution is None:
                raise AlgebraError(f"column {k} is outside the span of a basis", "NON_TU_RELATION")
            value = solution[-1]
            if value not in (Fraction(-1), Fraction(0), Fraction(1)):
                raise AlgebraError(f"cocircuit value {value} on column {k} is not in {{-1, 0, 1}}", "NON_TU_RELATION")
            values.append(int(value))
        found[support] = SignedCocircuit(tuple(values))
    return sorted(found.values(), key=lambda c: c.support)


def _is_independent(M: OrientedRegularMatroid, subset: Sequence[int]) -> bool:
    return M.subset_rank(subset) == len(subset)


def matroid_min_dijoins(M: OrientedRegularMatroid, max_edges: int | None = None) -> DijoinCertificate:
    """Minimum column sets meeting every directed cocircuit, searched among independent sets."""
    guard_size(M.size, max_edges)
    masks = []
    for cocircuit in signed_cocircuits(M):
        if cocircuit.directed:
            masks.append(sum(1 << i for i in cocircuit.support))
    zero = (0,) * M.row_count
    for size in range(M.size + 1):
        found = []
        for subset in combinations(range(M.size), size):
            chosen = sum(1 << i for i in subset)
            if all(mask & chosen for mask in masks) and _is_independent(M, subset):
                found.append(subset)
        if found:
            vectors = {
                tuple(sum(col) for col in zip(zero, *(M.column(i) for i in subset))) for subset in found
            }
            return DijoinCertificate(size, tuple(found), tuple(sorted(vectors)))
    raise CheckFailure("no dijoin found; every ground set meets all directed cocircuits", "THEOREM_VIOLATION")


def matroid_interior_polynomial(
    M: OrientedRegularMatroid, check: bool = True, max_edges: int | None = None
) -> Polynomial:
    """h* of conv({0} u columns); with ``check`` the degree and leading coefficient are tied to dijoins."""
    poly = hstar(M.polytope())
    if check:
        certificate = matroid_min_dijoins(M, max_edges)
        if poly.degree != M.rank - certificate.nu:
            raise CheckFailure(
                f"interior polynomial {poly.as_list()} has degree {poly.degree}, "
                f"expected rank {M.rank} minus nu {certificate.nu}",
                "THEOREM_VIOLATION",
            )
        if poly.leading_coefficient != len(certificate.net_degree_vectors):
            raise CheckFailure(
                f"leading coefficient {poly.leading_coefficient} differs from the "
                f"{len(certificate.net_degree_vectors)} distinct minimum dijoin sums",
                "THEOREM_VIOLATION",
            )
    return poly


def graphic_matroid(G: DiGraph) -> OrientedRegularMatroid:
    """Vertex-edge incidence matrix; column i is 1_head - 1_tail."""
    columns = [G.edge_vector(i) for i in range(G.m)]
    rows = tuple(tuple(col[v] for col in columns) for v in range(G.n))
    return OrientedRegularMatroid(rows, G.m)


def dual_matroid(M: OrientedRegularMatroid) -> OrientedRegularMatroid:
    """
    Orthogonal dual: rows spanning the kernel of M, columns kept in ground-set order.

    From the reduced form [I | D] (up to column order) the dual rows are e_j - sum_i D[i][j] e_{p_i}
    for every non-pivot column j.
    """
    if M.matrix:
        reduced, pivots = rref(M.as_rational)
    else:
        reduced, pivots = [], ()
    free = [j for j in range(M.size) if j not in pivots]
    rows = []
    for j in free:
        row = [0] * M.size
        row[j] = 1
        for i, p in enumerate(pivots):
            value = -reduced[i][j]
            if value.denominator != 1 or abs(value) > 1:
                raise AlgebraError(
                    f"pivoted form has entry {reduced[i][j]} in column {j}; the matrix is not unimodular",
                    "NON_UNIT_PIVOT",
                )
            row[p] = int(value)
        rows.append(tuple(row))
    return OrientedRegularMatroid(tuple(rows), M.size)


def cographic_matroid(G: DiGraph) -> OrientedRegularMatroid:
    return dual_matroid(graphic_matroid(G))


def is_co_eulerian(M: OrientedRegularMatroid) -> bool:
    return all(len(c.plus) == len(c.minus) for c in signed_circuits(M))


def is_bipartite_matroid(M: OrientedRegularMatroid) -> bool:
    return all(len(c.support) % 2 == 0 for c in signed_circuits(M))


def orthogonality_violations(M: OrientedRegularMatroid) -> list[tuple[SignedCircuit, SignedCocircuit]]:
    """Circuit/cocircuit pairs that meet but lack a sign agreement or a sign disagreement."""
    bad = []
    for circuit in signed_circuits(M):
        for cocircuit in signed_cocircuits(M):
            if not set(circuit.support) & set(cocircuit.support):
                continue
            agree = (circuit.plus & cocircuit.plus) | (circuit.minus & cocircuit.minus)
            disagree = (circuit.plus & cocircuit.minus) | (circuit.minus & cocircuit.plus)
            if not agree or not disagree:
                bad.append((circuit, cocircuit))
    return bad


@dataclass(frozen=True)
class MatroidFacetReport:
    cut_facets: int
    other_facets: int
    directed_cocircuits: int
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


def classify_matroid_facets(M: OrientedRegularMatroid) -> MatroidFacetReport:
    """
    Facets through 0 against directed cocircuits, the rest against normals with l . a_i <= 1.

    Failures are reported, not raised.
    """
    P = M.polytope()
    directed = {c.support for c in signed_cocircuits(M) if c.directed}
    problems = []
    cut_supports = set()
    other = 0
    for facet in P.facet_list:
        values = [sum(a * x for a, x in zip(facet.normal, col)) for col in M.columns]
        if facet.kind == FacetKind.CUT:
            off = tuple(i for i, v in enumerate(values) if v != 0)
            cut_supports.add(off)
            if off not in directed or any(v not in (0, -1) for v in values):
                problems.append(f"facet through 0 with normal {facet.normal} leaves columns {off}")
        else:
            other += 1
            tight = [i for i, v in enumerate(values) if v == facet.offset]
            if facet.offset != 1 or any(v > 1 for v in values):
                problems.append(f"facet {facet.normal} . x <= {facet.offset} is not an admissible functional")
            elif M.subset_rank(tight) != M.rank:
                problems.append(f"tight columns {tight} of facet {facet.normal} do not have full rank")
    missing = directed - cut_supports
    if missing:
        problems.append(f"directed cocircuits {sorted(missing)} have no facet")
    if problems:
        logger.warning(f"matroid facet description failed: {problems[0]}")
    return MatroidFacetReport(len(cut_supports), other, len(directed), tuple(problems))


def pivot(M: OrientedRegularMatroid, row: int, col: int) -> OrientedRegularMatroid:
    """Eliminate column ``col`` using the unit entry at (row, col); keeps unimodularity."""
    lead = M.matrix[row][col]
    if lead == 0:
        raise AlgebraError(f"pivot entry at ({row}, {col}) is zero", "RANK_DEFICIENT_PIVOT")
    if lead not in (-1, 1):
        raise AlgebraError(f"pivot entry at ({row}, {col}) is {lead}, not a unit", "NON_UNIT_PIVOT")
    base = [lead * x for x in M.matrix[row]]
    out = []
    for i, current in enumerate(M.matrix):
        if i == row:
            out.append(tuple(base))
        else:
            factor = current[col]
            out.append(tuple(x - factor * y for x, y in zip(current, base)))
    return OrientedRegularMatroid(tuple(out), M.size)


def negate_column(M: OrientedRegularMatroid, col: int) -> OrientedRegularMatroid:
    return OrientedRegularMatroid(
        tuple(tuple(-x if j == col else x for j, x in enumerate(row)) for row in M.matrix), M.size
    )


def scramble(M: OrientedRegularMatroid, rng: random.Random, steps: int = 4) -> OrientedRegularMatroid:
    """Random unit pivots, row negations, row swaps and a column permutation."""
    current = M
    for _ in range(steps):
        units = [(i, j) for i, row in enumerate(current.matrix) for j, x in enumerate(row) if x != 0]
        if units:
            current = pivot(current, *rng.choice(units))
        rows = list(current.matrix)
        if rows:
            k = rng.randrange(len(rows))
            rows[k] = tuple(-x for x in rows[k])
            rng.shuffle(rows)
        current = OrientedRegularMatroid(tuple(rows), current.size)
    order = list(range(current.size))
    rng.shuffle(order)
    return OrientedRegularMatroid(tuple(tuple(row[j] for j in order) for row in current.matrix), current.size)
