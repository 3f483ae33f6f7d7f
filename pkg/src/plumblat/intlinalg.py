"""Exact integer and rational linear algebra helpers.

Everything here is exact: integer matrices go through fraction-free Bareiss
elimination, rational ones through ``fractions.Fraction``.  No floating point
is used anywhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

from .errors import EnumerationBudgetExceeded

Matrix = Sequence[Sequence[int]]

POSITIVE_DEFINITE = "positive_definite"
POSITIVE_SEMIDEFINITE = "positive_semidefinite"
INDEFINITE = "indefinite"


def det_bareiss(rows: Matrix) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [[int(x) for x in row] for row in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def leading_principal_minors(rows: Matrix) -> list[int]:
    """Minors det(A[:k,:k]) for k = 1..n, each computed independently."""
    n = len(rows)
    return [det_bareiss([row[:k] for row in rows[:k]]) for k in range(1, n + 1)]


def adjugate(rows: Matrix) -> list[list[int]]:
    """Adjugate matrix, so that A * adj(A) = det(A) * I."""
    n = len(rows)
    if n == 0:
        return []
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            adj[j][i] = (-1) ** (i + j) * det_bareiss(minor)
    return adj


def solve_exact(rows: Matrix, rhs: Sequence[Fraction | int]) -> list[Fraction]:
    """Solve A x = rhs exactly for invertible integer A."""
    det = det_bareiss(rows)
    if det == 0:
        raise ZeroDivisionError("matrix is singular")
    adj = adjugate(rows)
    n = len(rows)
    return [
        Fraction(sum(adj[i][j] * Fraction(rhs[j]) for j in range(n)), 1) / det
        for i in range(n)
    ]


def psd_classify(rows: Sequence[Sequence[int | Fraction]]) -> str:
    """Classify a symmetric rational matrix as PD, PSD or indefinite.

    Uses symmetric elimination: a positive pivot reduces to a Schur
    complement, a negative diagonal entry anywhere certifies indefiniteness,
    and an all-zero-diagonal remainder must vanish entirely for
    semidefiniteness.
    """
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    active = list(range(n))
    while active:
        pivot = None
        for i in active:
            if a[i][i] < 0:
                return INDEFINITE
            if a[i][i] > 0 and pivot is None:
                pivot = i
        if pivot is None:
            for i in active:
                for j in active:
                    if a[i][j] != 0:
                        return INDEFINITE
            return POSITIVE_SEMIDEFINITE
        active.remove(pivot)
        d = a[pivot][pivot]
        for i in active:
            f = a[i][pivot] / d
            if f:
                for j in active:
                    a[i][j] -= f * a[pivot][j]
    return POSITIVE_DEFINITE


def ldl_decompose(
    rows: Sequence[Sequence[int | Fraction]],
) -> tuple[list[list[Fraction]], list[Fraction]]:
    """LDL^T factorization of a positive-definite symmetric rational matrix.

    Returns (L, d) with L unit lower triangular and d the positive diagonal.
    """
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    lower = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    diag: list[Fraction] = []
    for k in range(n):
        d = a[k][k] - sum(diag[j] * lower[k][j] ** 2 for j in range(k))
        if d <= 0:
            raise ValueError("matrix is not positive definite")
        diag.append(d)
        for i in range(k + 1, n):
            s = a[i][k] - sum(diag[j] * lower[i][j] * lower[k][j] for j in range(k))
            lower[i][k] = s / d
    return lower, diag


def invert_unit_lower(lower: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse of a unit lower triangular matrix."""
    n = len(lower)
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            inv[i][j] = -sum(lower[i][k] * inv[k][j] for k in range(j, i))
    return inv


def min_eigenvalue_lower_bound(rows: Matrix) -> Fraction:
    """Exact rational lower bound for the least eigenvalue of a PD matrix.

    From Q = L D L^T:  x'Qx >= min(d) |L'x|^2 >= (min(d)/|L^{-1}|_F^2) |x|^2.
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    lower, diag = ldl_decompose(rows)
    inv = invert_unit_lower(lower)
    frob_sq = sum(v * v for row in inv for v in row)
    return min(diag) / frob_sq


def rank_rational(rows: Sequence[Sequence[Fraction | int]]) -> int:
    """Rank over the rationals by Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    col = 0
    while rank < len(a) and col < ncols:
        pivot_row = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if pivot_row is None:
            col += 1
            continue
        a[rank], a[pivot_row] = a[pivot_row], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [v * inv for v in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[rank])]
        rank += 1
        col += 1
    return rank


def sqrt_upper_bound(value: Fraction) -> Fraction:
    """Rational upper bound for sqrt(value), value >= 0."""
    if value < 0:
        raise ValueError("negative radicand")
    num, den = value.numerator, value.denominator
    root = isqrt(num * den)
    if root * root < num * den:
        root += 1
    return Fraction(root, den)


def quadratic_sublevel_points(
    matrix: Matrix,
    linear: Sequence[int],
    constant: int | Fraction,
    point_cap: int,
) -> Iterator[tuple[int, ...]]:
    """All integer x with x'Mx + b.x + c <= 0 for positive-definite M.

    Completes the square and walks a Fincke-Pohst style recursion on an exact
    LDL factorization; every emitted point is re-verified against the exact
    inequality, so the rational square-root rounding can never admit or drop
    a point.  Raises EnumerationBudgetExceeded past ``point_cap`` scanned
    candidates.
    """
    n = len(matrix)
    constant = Fraction(constant)
    if n == 0:
        if constant <= 0:
            yield ()
        return
    center = [-v / 2 for v in solve_exact(matrix, linear)]
    radius_sq = (
        sum(
            Fraction(matrix[i][j]) * center[i] * center[j]
            for i in range(n)
            for j in range(n)
        )
        - constant
    )
    if radius_sq < 0:
        return
    lower, diag = ldl_decompose(matrix)
    budget = [int(point_cap)]
    coords = [0] * n

    def spend() -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise EnumerationBudgetExceeded(
                f"quadratic sublevel enumeration exceeded {point_cap} candidates"
            )

    def recurse(i: int, remaining: Fraction) -> Iterator[tuple[int, ...]]:
        # z_i = (x_i - center_i) + sum_{j>i} L[j][i] (x_j - center_j)
        shift = sum(lower[j][i] * (coords[j] - center[j]) for j in range(i + 1, n))
        target = center[i] - shift
        half_width = sqrt_upper_bound(remaining / diag[i])
        lo_f = target - half_width
        lo = lo_f.numerator // lo_f.denominator  # floor; scan starts one below ceil
        hi_f = target + half_width
        hi = -((-hi_f.numerator) // hi_f.denominator)  # ceil
        for x in range(lo, hi + 1):
            spend()
            used = diag[i] * (x - target) ** 2
            if used > remaining:
                continue
            coords[i] = x
            if i == 0:
                yield tuple(coords)
            else:
                yield from recurse(i - 1, remaining - used)

    yield from recurse(n - 1, radius_sq)
