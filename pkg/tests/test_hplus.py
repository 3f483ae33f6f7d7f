"""The graded engine, its sweep oracle, and the kernel-of-U cross-check."""

from __future__ import annotations

from itertools import product

import pytest

from conftest import e8, elliptic_a, lens, random_forest
from plumblat import (
    CharVector,
    EdgeSign,
    compute_homology,
    compute_hplus,
    ker_u_cross_check,
    rational_via_hplus,
    validate_forest,
)
from plumblat.charlattice import weight_radius_sq_bound
from plumblat.errors import EnumerationBudgetExceeded
from plumblat.hplus import _birth_counts, _orbit_members, _plus_grading


def test_single_vertex_orbit_of_zero():
    graded = compute_hplus(lens(2), CharVector((0,)), extra_levels=2)
    assert graded.ker_u_rank == 1
    assert graded.stabilized_at == 0
    assert [(l.level, l.rank, l.births) for l in graded.levels] == [
        (0, 1, 1),
        (1, 1, 0),
        (2, 1, 0),
    ]


def test_single_vertex_plateau_orbit():
    """k0 with value 2 on a -2 vertex: minima at 0 and 1 join at level 0."""
    graded = compute_hplus(lens(2), CharVector((2,)))
    assert graded.ker_u_rank == 1
    assert graded.levels[0] == type(graded.levels[0])(level=0, rank=1, births=1)


def test_e8_single_orbit_rank_one():
    result = compute_homology(e8())
    graded = compute_hplus(e8(), result.per_orbit[0].orbit)
    assert graded.ker_u_rank == 1


def test_cross_check_lens_spaces():
    report = ker_u_cross_check(lens(5))
    assert report.ok
    assert [r.ker_u_rank for r in report.rows] == [1] * 5
    assert sum(r.homology_dim for r in report.rows) == 5


def test_cross_check_e8():
    report = ker_u_cross_check(e8())
    assert report.ok
    assert len(report.rows) == 1


def test_cross_check_elliptic_a():
    report = ker_u_cross_check(elliptic_a())
    assert report.ok
    assert sorted(r.ker_u_rank for r in report.rows) == [1, 1, 1, 2]


def test_cross_check_random_suite(rng):
    """Fifty random small forests: quotient dims equal kernel ranks."""
    for _ in range(50):
        forest = random_forest(rng, max_vertices=5)
        assert ker_u_cross_check(forest).ok


def test_rational_via_hplus():
    assert rational_via_hplus(e8())
    chain = validate_forest(
        [("a", -2), ("b", -2), ("c", -3)], [("a", "b"), ("b", "c")]
    )
    assert rational_via_hplus(chain)
    assert not rational_via_hplus(elliptic_a())


def test_stabilization_is_stable(rng):
    """Extra levels past stabilization stay connected and birthless."""
    cases = [elliptic_a(), lens(4)]
    for _ in range(10):
        cases.append(random_forest(rng, max_vertices=4))
    for forest in cases:
        result = compute_homology(forest)
        for oh in result.per_orbit:
            graded = compute_hplus(forest, oh.orbit, extra_levels=2)
            tail = [l for l in graded.levels if l.level > graded.stabilized_at]
            assert len(tail) == 2
            assert all(l.rank == 1 and l.births == 0 for l in tail)


def _brute_levels(forest, rep, up_to):
    """Independent oracle: enumerate sublevel sets by scanning a certified
    window, then count components and births with a fresh union-find."""
    grading = _plus_grading(forest, rep)
    form = grading.form
    radius_sq = weight_radius_sq_bound(form, grading.k0, up_to)
    bound = 1
    while bound * bound <= radius_sq:
        bound += 1
    assert bound ** len(form) <= 10**6, "oracle window too large for this case"
    window = [
        x
        for x in product(range(-bound, bound + 1), repeat=len(form))
        if sum(c * c for c in x) <= radius_sq
    ]
    weights = {x: grading.weight(x) for x in window}
    levels = []
    previous_points = set()
    for n in range(min(weights.values()), up_to + 1):
        pts = [x for x, w in weights.items() if w <= n]
        index = {x: i for i, x in enumerate(pts)}
        parent = list(range(len(pts)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x in pts:
            for q in grading.neighbors(x):
                j = index.get(q)
                if j is not None:
                    parent[find(index[x])] = find(j)
        components = {}
        for x in pts:
            components.setdefault(find(index[x]), []).append(x)
        births = sum(
            1
            for members in components.values()
            if not any(x in previous_points for x in members)
        )
        if pts:
            levels.append((n, len(components), births))
        previous_points = set(pts)
    return levels


def test_sweep_matches_brute_force_oracle(rng):
    """Level tables against a from-scratch window enumeration.

    Kept to three vertices: the certified window is conservative, and its
    volume grows too fast with the rank for an exhaustive scan beyond that.
    """
    cases = [
        validate_forest([("a", -2), ("b", -2)], [("a", "b")]),
        validate_forest([("a", -1), ("b", -3)], [("a", "b")]),
    ]
    for _ in range(6):
        cases.append(random_forest(rng, max_vertices=3, lo=-3))
    for forest in cases:
        result = compute_homology(forest)
        for oh in result.per_orbit:
            graded = compute_hplus(forest, oh.orbit, extra_levels=1)
            expected = _brute_levels(
                forest, oh.orbit.representative, graded.levels[-1].level
            )
            got = [(l.level, l.rank, l.births) for l in graded.levels]
            assert got == expected[: len(got)]
            assert sum(b for _, _, b in expected) == graded.ker_u_rank


def test_birth_counts_equal_homology_dim_per_orbit(rng):
    """The plateau births, summed, are the per-orbit quotient dimension."""
    for _ in range(8):
        forest = random_forest(rng, max_vertices=4)
        result = compute_homology(forest)
        for oh in result.per_orbit:
            grading = _plus_grading(forest, oh.orbit.representative)
            minima = grading.minima_from_members(
                _orbit_members(grading, 10**8)
            )
            births = _birth_counts(grading, minima)
            assert sum(births.values()) == oh.dim


def test_point_budget():
    with pytest.raises(EnumerationBudgetExceeded):
        compute_hplus(elliptic_a(), compute_homology(elliptic_a()).per_orbit[0].orbit, point_cap=3)


def test_empty_forest():
    report = ker_u_cross_check(validate_forest([]))
    assert report.ok
    assert report.rows[0].ker_u_rank == 1


def test_plus_convention_input_accepted():
    forest = validate_forest(
        [("a", -2), ("b", -3)], [("a", "b")], EdgeSign.PLUS_ONE
    )
    assert ker_u_cross_check(forest).ok


def test_orbit_given_as_bare_vector():
    graded = compute_hplus(lens(3), CharVector((1,)))
    assert graded.ker_u_rank == 1
    assert graded.orbit.index == -1  # placeholder index for ad hoc vectors


def test_sublevel_complex_snapshot():
    from plumblat import sublevel_complex

    complex_0 = sublevel_complex(lens(2), CharVector((2,)), 0)
    assert complex_0.points == {(0,), (1,)}
    assert complex_0.rank == 1
    complex_2 = sublevel_complex(lens(2), CharVector((2,)), 2)
    assert complex_2.points == {(-1,), (0,), (1,), (2,)}
    assert complex_2.rank == 1
    # the two newborn plateaus of the wide orbit of elliptic_a at its first level
    result = compute_homology(elliptic_a())
    orbit = result.per_orbit[0].orbit
    graded = compute_hplus(elliptic_a(), orbit)
    first = graded.levels[0]
    snapshot = sublevel_complex(elliptic_a(), orbit, first.level)
    assert snapshot.rank == first.rank
