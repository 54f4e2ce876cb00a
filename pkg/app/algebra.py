"""
Exact arithmetic layer: integer polynomials and small dense rational linear algebra.

Everything here works over Python integers and ``fractions.Fraction``; nothing
touches floating point.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from app.errors import AlgebraError, CheckFailure, SingularUnderdeterminedError

logger = logging.getLogger(__name__)

_X = sympy.Symbol("x")


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in ascending coefficient order, trailing zeros stripped."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "Polynomial":
        return cls((0,) * exponent + (coefficient,))

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "Polynomial":
        """Sum of x^k over the given exponents (with multiplicity)."""
        counts = Counter(exponents)
        if not counts:
            return cls()
        return cls(tuple(counts.get(i, 0) for i in range(max(counts) + 1)))

    @property
    def degree(self) -> int | None:
        """None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def lowest_exponent(self) -> int | None:
        """Smallest i with a nonzero coefficient, None for the zero polynomial."""
        return next((i for i, c in enumerate(self.coeffs) if c != 0), None)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coefficient(i) + other.coefficient(i) for i in range(size)))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def __call__(self, x: int | Fraction) -> int | Fraction:
        value: int | Fraction = 0
        for c in reversed(self.coeffs):
            value = value * x + c
        return value

    def shift(self, k: int) -> "Polynomial":
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return Polynomial((0,) * k + self.coeffs)

    def reversed_into(self, degree: int) -> "Polynomial":
        """Return x^degree * p(1/x); the degree must bound deg p."""
        if self.is_zero:
            return self
        if len(self.coeffs) - 1 > degree:
            raise CheckFailure(
                f"reversal into degree {degree} of a degree {self.degree} polynomial has negative exponents",
                "NEGATIVE_EXPONENT",
            )
        padded = self.coeffs + (0,) * (degree + 1 - len(self.coeffs))
        return Polynomial(tuple(reversed(padded)))

    def is_palindromic(self) -> bool:
        return self.coeffs == tuple(reversed(self.coeffs))

    def dominated_by(self, other: "Polynomial") -> bool:
        """Coefficientwise comparison self <= other."""
        size = max(len(self.coeffs), len(other.coeffs))
        return all(self.coefficient(i) <= other.coefficient(i) for i in range(size))

    def comparable_with(self, other: "Polynomial") -> bool:
        return self.dominated_by(other) or other.dominated_by(self)

    def as_list(self) -> list[int]:
        return list(self.coeffs)

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)) or [0], _X)

    def __str__(self) -> str:
        return str(self.to_sympy().as_expr())


@dataclass(frozen=True)
class RatMatrix:
    """Dense matrix with rational entries, stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise AlgebraError(f"entry table does not match shape {self.rows}x{self.cols}", "SHAPE_MISMATCH")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | Fraction]], cols: int | None = None) -> "RatMatrix":
        width = len(rows[0]) if rows else (cols or 0)
        return cls(len(rows), width, tuple(tuple(Fraction(x) for x in row) for row in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int | Fraction]], rows: int) -> "RatMatrix":
        return cls(
            rows,
            len(columns),
            tuple(tuple(Fraction(columns[j][i]) for j in range(len(columns))) for i in range(rows)),
        )

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def select_columns(self, indices: Sequence[int]) -> "RatMatrix":
        return RatMatrix(self.rows, len(indices), tuple(tuple(row[j] for j in indices) for row in self.entries))

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))


def _integer_rows(M: RatMatrix) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; rank is unchanged."""
    out = []
    for row in M.entries:
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination. The empty matrix has determinant 1."""
    a = [list(row) for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def mat_rank(M: RatMatrix) -> int:
    """Rank over the rationals by fraction-free elimination."""
    a = _integer_rows(M)
    rank = 0
    prev = 1
    for col in range(M.cols):
        pivot = next((r for r in range(rank, M.rows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for r in range(rank + 1, M.rows):
            for c in range(col + 1, M.cols):
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) // prev
            a[r][col] = 0
        prev = a[rank][col]
        rank += 1
        if rank == M.rows:
            break
    return rank


def rref(M: RatMatrix) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    """Reduced row echelon form and its pivot columns; zero rows are kept at the bottom."""
    a = [list(row) for row in M.entries]
    pivots: list[int] = []
    r = 0
    for col in range(M.cols):
        pivot = next((i for i in range(r, M.rows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        lead = a[r][col]
        a[r] = [x / lead for x in a[r]]
        for i in range(M.rows):
            if i != r and a[i][col] != 0:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == M.rows:
            break
    return a, tuple(pivots)


def canonical_sign(vector: Sequence[int]) -> tuple[int, ...]:
    """Flip a signed vector so that its first nonzero entry is positive."""
    first = next((x for x in vector if x != 0), 0)
    return tuple(-x for x in vector) if first < 0 else tuple(vector)


def kernel_vector_on_support(M: RatMatrix, support: Iterable[int]) -> tuple[int, ...] | None:
    """
    The {-1,0,+1} kernel vector with exactly the given support, if those columns are minimally dependent.

    Returns None when the columns are independent or not minimally dependent.
    Raises AlgebraError (NON_TU_RELATION) when the minimal relation needs other coefficients.
    """
    cols = sorted(set(support))
    if not cols:
        return None
    sub = M.select_columns(cols)
    reduced, pivots = rref(sub)
    free = [j for j in range(len(cols)) if j not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    local = [Fraction(0)] * len(cols)
    local[f] = Fraction(1)
    for i, p in enumerate(pivots):
        local[p] = -reduced[i][f]
    if any(x == 0 for x in local):
        return None
    scale = math.lcm(*(x.denominator for x in local))
    ints = [int(x * scale) for x in local]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if any(abs(x) != 1 for x in ints):
        raise AlgebraError(f"minimal relation on columns {cols} has coefficients {ints}", "NON_TU_RELATION")
    full = [0] * M.cols
    for j, x in zip(cols, ints):
        full[j] = x
    return canonical_sign(full)


def solve_rational(M: RatMatrix, b: Sequence[int | Fraction]) -> tuple[Fraction, ...] | None:
    """Exact solution of M x = b; None if inconsistent, error if the solution is not unique."""
    if len(b) != M.rows:
        raise AlgebraError(f"right-hand side has {len(b)} entries for {M.rows} rows", "SHAPE_MISMATCH")
    augmented = RatMatrix(M.rows, M.cols + 1, tuple(row + (Fraction(v),) for row, v in zip(M.entries, b)))
    reduced, pivots = rref(augmented)
    if M.cols in pivots:
        return None
    if len(pivots) < M.cols:
        raise SingularUnderdeterminedError(
            f"system of rank {len(pivots)} in {M.cols} unknowns has infinitely many solutions"
        )
    solution = [Fraction(0)] * M.cols
    for i, p in enumerate(pivots):
        solution[p] = reduced[i][M.cols]
    return tuple(solution)
