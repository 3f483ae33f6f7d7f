"""Exact linear algebra against independent oracles."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plumblat import intlinalg
from plumblat.errors import EnumerationBudgetExceeded


def det_gauss(rows):
    """Independent determinant oracle: plain Gaussian elimination over Q."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                a[i] = [v - f * w for v, w in zip(a[i], a[k])]
    return det


small_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-6, 6), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
)


@given(small_matrices)
@settings(max_examples=150, deadline=None)
def test_bareiss_matches_gauss(rows):
    assert intlinalg.det_bareiss(rows) == det_gauss(rows)


def test_det_empty_matrix_is_one():
    assert intlinalg.det_bareiss([]) == 1


def test_leading_principal_minors():
    m = [[-2, -1, 0], [-1, -2, -1], [0, -1, -2]]
    assert intlinalg.leading_principal_minors(m) == [-2, 3, -4]


@given(small_matrices)
@settings(max_examples=80, deadline=None)
def test_adjugate_identity(rows):
    n = len(rows)
    det = intlinalg.det_bareiss(rows)
    adj = intlinalg.adjugate(rows)
    for i in range(n):
        for j in range(n):
            entry = sum(rows[i][k] * adj[k][j] for k in range(n))
            assert entry == (det if i == j else 0)


def test_solve_exact():
    m = [[-2, -1], [-1, -3]]
    x = intlinalg.solve_exact(m, [1, 0])
    assert [sum(Fraction(m[i][j]) * x[j] for j in range(2)) for i in range(2)] == [1, 0]


def test_psd_classify_cases():
    assert intlinalg.psd_classify([[2, 0], [0, 3]]) == intlinalg.POSITIVE_DEFINITE
    assert intlinalg.psd_classify([[1, 1], [1, 1]]) == intlinalg.POSITIVE_SEMIDEFINITE
    assert intlinalg.psd_classify([[0, 1], [1, 0]]) == intlinalg.INDEFINITE
    assert intlinalg.psd_classify([[1, 0], [0, -1]]) == intlinalg.INDEFINITE
    assert intlinalg.psd_classify([[0, 0], [0, 0]]) == intlinalg.POSITIVE_SEMIDEFINITE
    assert intlinalg.psd_classify([]) == intlinalg.POSITIVE_DEFINITE


def _random_pd(rng, n):
    """B^T B + I for random integer B is positive definite."""
    b = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    return [
        [sum(b[k][i] * b[k][j] for k in range(n)) + (i == j) for j in range(n)]
        for i in range(n)
    ]


def test_ldl_reconstructs(rng):
    for _ in range(30):
        n = rng.randint(1, 5)
        m = _random_pd(rng, n)
        lower, diag = intlinalg.ldl_decompose(m)
        for i in range(n):
            for j in range(n):
                entry = sum(
                    diag[k] * lower[i][k] * lower[j][k] for k in range(n)
                )
                assert entry == m[i][j]


def test_ldl_rejects_indefinite():
    with pytest.raises(ValueError):
        intlinalg.ldl_decompose([[1, 0], [0, -1]])


def test_min_eigenvalue_bound_is_a_lower_bound(rng):
    for _ in range(30):
        n = rng.randint(1, 4)
        m = _random_pd(rng, n)
        lam = intlinalg.min_eigenvalue_lower_bound(m)
        assert lam > 0
        for _ in range(40):
            x = [rng.randint(-5, 5) for _ in range(n)]
            q = sum(m[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
            norm_sq = sum(v * v for v in x)
            assert q >= lam * norm_sq


def test_rank_rational():
    assert intlinalg.rank_rational([[1, 2], [2, 4]]) == 1
    assert intlinalg.rank_rational([[1, 0], [0, 1]]) == 2
    assert intlinalg.rank_rational([[0, 0], [0, 0]]) == 0
    assert intlinalg.rank_rational([]) == 0


@given(st.fractions(min_value=0, max_value=1000))
@settings(max_examples=100, deadline=None)
def test_sqrt_upper_bound(value):
    bound = intlinalg.sqrt_upper_bound(value)
    assert bound * bound >= value


def _brute_sublevel(matrix, linear, constant, window):
    n = len(matrix)
    out = set()

    def f(x):
        quad = sum(matrix[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        lin = sum(linear[i] * x[i] for i in range(n))
        return quad + lin + constant

    from itertools import product

    for x in product(range(-window, window + 1), repeat=n):
        if f(x) <= 0:
            out.add(x)
    return out


def test_quadratic_sublevel_points_match_brute_force(rng):
    for _ in range(25):
        n = rng.randint(1, 3)
        m = _random_pd(rng, n)
        linear = [rng.randint(-4, 4) for _ in range(n)]
        constant = rng.randint(-20, 2)
        got = set(intlinalg.quadratic_sublevel_points(m, linear, constant, 10**6))
        expected = _brute_sublevel(m, linear, constant, 30)
        assert got == expected


def test_quadratic_sublevel_budget():
    with pytest.raises(EnumerationBudgetExceeded):
        list(intlinalg.quadratic_sublevel_points([[1]], [0], -10**6, 10))
