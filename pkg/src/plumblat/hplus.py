"""Graded lattice cohomology of an orbit, and the kernel-of-U cross-oracle.

For a fixed characteristic vector k0, the weight w(x) = -((x,x) + <k0,x>)/2
(+1 edge convention) filters the lattice by sublevel sets S_n.  Only zeroth
cohomology is tracked: rank H^0(S_n) is the number of connected components,
where two lattice points are adjacent when they differ by one basis step and
both carry weight <= n.  U acts by restricting a component function to the
previous level, so rank(ker U) counts the component births: components of
S_n disjoint from S_{n-1}.

Births are computed without materializing any sublevel set.  A component of
S_n disjoint from S_{n-1} consists of points of weight exactly n, each of
which is a local minimum of w (its in-component neighbors share its weight
and everything else is heavier), and conversely a connected plateau of
weight-n local minima founds a new component unless some member has a
strictly lighter neighbor, or a same-weight neighbor that is not itself a
local minimum (such a neighbor has a lighter neighbor of its own, linking
the plateau to the previous level either way).  The local minima are exactly
the orbit's box vectors under x <-> k0 + 2x*, hence finite and enumerated up
front; scanning their unit neighborhoods settles every birth.

Component counts for ranks do need sublevel sets, and come from a certified
breadth-first flood out of the local minima (every component of S_n contains
a point of minimal weight, which is a local minimum, so the flood misses
nothing).  Two facts keep the sweep short and certify the stopping level:

* every component of every S_n contains some newborn core, so
  rank H^0(S_n) <= total births; in particular a kernel rank of one forces
  every level to be connected and no sweep is needed at all;
* past the last birth level, a connected complex stays connected: any new
  point drains along a strictly descending path to a local minimum, whose
  plateau -- being birthless -- links to strictly lighter points and hence,
  inductively, to the connected core.

An exact ellipsoid bound derived from the rational LDL eigenvalue bound
checks every flooded point, and a point cap guards runtime.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product

from .charlattice import (
    DEFAULT_BOX_CAP,
    CharVector,
    OrbitIndexer,
    SpinCOrbit,
    box_ranges,
    weight_radius_sq_bound,
)
from .errors import (
    BoxTooLarge,
    EnumerationBudgetExceeded,
    InternalInvariantViolation,
    NotNegativeDefinite,
    ParityViolation,
)
from .homology import compute_homology
from .moves import convert_convention
from .plumbing import EdgeSign, IntersectionForm, PlumbingForest, intersection_form

DEFAULT_POINT_CAP = 10**7

Point = tuple[int, ...]


@dataclass(frozen=True)
class HPlusLevel:
    level: int
    rank: int
    births: int


@dataclass(frozen=True)
class SublevelComplex:
    """A single sublevel set: its lattice points and component partition.

    Only vertices and edges of the cubical complex matter for component
    counts (a higher cube never joins what its edges have not), so points
    plus unit-step adjacency carry the whole structure.
    """

    level: int
    points: frozenset[Point]
    components: tuple[tuple[Point, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class GradedHPlus:
    """Graded component counts for one orbit.

    ``levels`` runs over consecutive weights from the least local-minimum
    weight through ``stabilized_at`` (plus any requested extra levels); from
    ``stabilized_at`` on, the complex stays connected and nothing is born.
    ``ker_u_rank`` is the total number of births.
    """

    orbit: SpinCOrbit
    levels: tuple[HPlusLevel, ...]
    ker_u_rank: int
    stabilized_at: int


class _OrbitGrading:
    """Weight bookkeeping for one orbit in the +1 convention."""

    def __init__(self, plus: PlumbingForest, form: IntersectionForm, k0: CharVector):
        self.plus = plus
        self.form = form
        self.k0 = k0
        self.n = len(plus)
        self._framings = plus.framings
        self._edges = plus.edges
        self._k0e = k0.evals

    def weight(self, x: Point) -> int:
        framings = self._framings
        k0e = self._k0e
        s = 0
        for i in range(self.n):
            xi = x[i]
            s += xi * (framings[i] * xi + k0e[i])
        for a, b in self._edges:
            s += 2 * x[a] * x[b]
        if s % 2:
            raise ParityViolation("orbit representative is not characteristic")
        return -s // 2

    def neighbors(self, x: Point):
        for i in range(self.n):
            for step in (1, -1):
                yield x[:i] + (x[i] + step,) + x[i + 1 :]

    def minima_from_members(self, members) -> dict[Point, int]:
        """Local minima of w with their weights, one per orbit box vector."""
        indexer = OrbitIndexer(self.form)
        out: dict[Point, int] = {}
        for evals in members:
            x = indexer.lattice_coordinates(evals, self._k0e).coords
            out[x] = self.weight(x)
        if not out:
            raise InternalInvariantViolation("an orbit lost all its box vectors")
        return out


def _plus_grading(
    forest: PlumbingForest, representative: CharVector
) -> _OrbitGrading:
    if forest.edge_sign is EdgeSign.PLUS_ONE:
        plus, k0 = forest, representative
    else:
        conv = convert_convention(forest, (representative,))
        plus, k0 = conv.forest, conv.vectors[0]
    form = intersection_form(plus)
    if not form.is_negative_definite:
        raise NotNegativeDefinite("graded engine needs a negative-definite forest")
    return _OrbitGrading(plus, form, k0)


def _orbit_members(grading: _OrbitGrading, box_cap: int) -> list[Point]:
    """Box vectors in the orbit of k0, by direct key filtering."""
    form = grading.form
    size = 1
    ranges = box_ranges(form)
    for r in ranges:
        size *= len(r)
    if size > box_cap:
        raise BoxTooLarge(f"box holds {size} vectors, cap is {box_cap}")
    indexer = OrbitIndexer(form)
    base = indexer.key(grading.k0)
    return [evals for evals in product(*ranges) if indexer.key(evals) == base]


def _birth_counts(
    grading: _OrbitGrading, minima: dict[Point, int]
) -> dict[int, int]:
    """Births per level from the local-minima plateaus alone."""
    by_weight: dict[int, list[Point]] = {}
    for x, w in minima.items():
        by_weight.setdefault(w, []).append(x)
    births: dict[int, int] = {}
    for level, plateau in sorted(by_weight.items()):
        index = {p: i for i, p in enumerate(plateau)}
        parent = list(range(len(plateau)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        linked_below = [False] * len(plateau)
        for p in plateau:
            i = index[p]
            for q in grading.neighbors(p):
                j = index.get(q)
                if j is not None:
                    parent[find(i)] = find(j)
                    continue
                wq = minima.get(q)
                if wq is None:
                    wq = grading.weight(q)
                if wq <= level:
                    # lighter neighbor, or a same-weight neighbor that is not
                    # a local minimum: either way the plateau drains downward
                    linked_below[i] = True
        newborn = {}
        for i in range(len(plateau)):
            root = find(i)
            newborn.setdefault(root, True)
            if linked_below[i]:
                newborn[root] = False
        count = sum(1 for alive in newborn.values() if alive)
        if count:
            births[level] = count
    return births


def _sweep_levels(
    grading: _OrbitGrading,
    minima: dict[Point, int],
    births: dict[int, int],
    point_cap: int,
    extra_levels: int,
) -> tuple[list[HPlusLevel], int]:
    """Exact per-level component counts by certified flood, with births
    re-derived independently and compared against the plateau counts."""
    form = grading.form
    k0 = grading.k0
    minima_by_weight: dict[int, list[Point]] = {}
    for x, w in minima.items():
        minima_by_weight.setdefault(w, []).append(x)
    n_min = min(minima_by_weight)
    last_birth = max(births)

    points: dict[Point, int] = {}
    parent: list[int] = []
    rank: list[int] = []
    birth_level: list[int] = []
    frontier: dict[Point, int] = {}
    touched = 0

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        if rank[ra] < rank[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        if rank[ra] == rank[rb]:
            rank[ra] += 1
        birth_level[ra] = min(birth_level[ra], birth_level[rb])
        return True

    comp_count = 0
    levels: list[HPlusLevel] = []
    stabilized_at: int | None = None
    remaining_extra = extra_levels
    level = n_min
    while True:
        radius_sq = weight_radius_sq_bound(form, k0, level)
        queue: deque[Point] = deque(minima_by_weight.pop(level, ()))
        ready = [pt for pt, w in frontier.items() if w <= level]
        for pt in ready:
            del frontier[pt]
            queue.append(pt)
        added: list[int] = []
        while queue:
            pt = queue.popleft()
            if pt in points:
                continue
            if sum(c * c for c in pt) > radius_sq:
                raise InternalInvariantViolation(
                    "a sublevel point escaped the certified ellipsoid bound"
                )
            touched += 1
            if touched > point_cap:
                raise EnumerationBudgetExceeded(
                    f"sublevel sweep exceeded {point_cap} points"
                )
            node = len(parent)
            points[pt] = node
            parent.append(node)
            rank.append(0)
            birth_level.append(level)
            comp_count += 1
            added.append(node)
            for q in grading.neighbors(pt):
                other = points.get(q)
                if other is not None:
                    if union(node, other):
                        comp_count -= 1
                elif q not in frontier:
                    wq = grading.weight(q)
                    if wq <= level:
                        queue.append(q)
                    else:
                        frontier[q] = wq
        swept_births = len(
            {r for r in (find(node) for node in added) if birth_level[r] == level}
        )
        if swept_births != births.get(level, 0):
            raise InternalInvariantViolation(
                f"flood found {swept_births} births at level {level}, "
                f"plateau count says {births.get(level, 0)}"
            )
        levels.append(HPlusLevel(level=level, rank=comp_count, births=swept_births))
        if stabilized_at is None:
            if level >= last_birth and comp_count == 1:
                stabilized_at = level
                if remaining_extra == 0:
                    break
        else:
            remaining_extra -= 1
            if remaining_extra <= 0:
                break
        level += 1
    return levels, stabilized_at


def compute_hplus(
    forest: PlumbingForest,
    orbit: SpinCOrbit | CharVector,
    *,
    point_cap: int = DEFAULT_POINT_CAP,
    box_cap: int = DEFAULT_BOX_CAP,
    extra_levels: int = 0,
) -> GradedHPlus:
    """Component counts, births per level and the kernel-of-U rank.

    ``orbit`` may be a SpinCOrbit of the given forest or a bare
    characteristic vector in the forest's own convention; conversion to the
    +1 pairing happens internally.  Orbits with kernel rank one get their
    level table written down directly (a single birth forces every level to
    be connected); others pay for a flood sweep up to the certified
    stabilization level.
    """
    rep = orbit.representative if isinstance(orbit, SpinCOrbit) else orbit
    grading = _plus_grading(forest, rep)
    minima = grading.minima_from_members(_orbit_members(grading, box_cap))
    births = _birth_counts(grading, minima)
    ker_u_rank = sum(births.values())
    n_min = min(minima.values())
    if ker_u_rank == 1:
        stabilized_at = n_min
        levels = [HPlusLevel(level=n_min, rank=1, births=1)]
        for j in range(1, extra_levels + 1):
            levels.append(HPlusLevel(level=n_min + j, rank=1, births=0))
    else:
        levels, stabilized_at = _sweep_levels(
            grading, minima, births, point_cap, extra_levels
        )
    out_orbit = (
        orbit
        if isinstance(orbit, SpinCOrbit)
        else SpinCOrbit(representative=rep, index=-1)
    )
    return GradedHPlus(
        orbit=out_orbit,
        levels=tuple(levels),
        ker_u_rank=ker_u_rank,
        stabilized_at=stabilized_at,
    )


def sublevel_complex(
    forest: PlumbingForest,
    orbit: SpinCOrbit | CharVector,
    level: int,
    *,
    point_cap: int = DEFAULT_POINT_CAP,
    box_cap: int = DEFAULT_BOX_CAP,
) -> SublevelComplex:
    """Materialize one sublevel set by flooding from the local minima.

    Complete because every component of the set contains a local minimum;
    mostly useful for inspection and for testing the level tables.
    """
    rep = orbit.representative if isinstance(orbit, SpinCOrbit) else orbit
    grading = _plus_grading(forest, rep)
    minima = grading.minima_from_members(_orbit_members(grading, box_cap))
    radius_sq = weight_radius_sq_bound(grading.form, grading.k0, level)
    points: dict[Point, int] = {}
    parent: list[int] = []

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    queue = deque(x for x, w in minima.items() if w <= level)
    for pt in queue:
        if sum(c * c for c in pt) > radius_sq:
            raise InternalInvariantViolation(
                "a sublevel point escaped the certified ellipsoid bound"
            )
    while queue:
        pt = queue.popleft()
        if pt in points:
            continue
        if len(points) >= point_cap:
            raise EnumerationBudgetExceeded(
                f"sublevel enumeration exceeded {point_cap} points"
            )
        node = len(parent)
        points[pt] = node
        parent.append(node)
        for q in grading.neighbors(pt):
            other = points.get(q)
            if other is not None:
                ra, rb = find(node), find(other)
                if ra != rb:
                    parent[rb] = ra
            elif grading.weight(q) <= level:
                queue.append(q)
    groups: dict[int, list[Point]] = {}
    for pt, node in points.items():
        groups.setdefault(find(node), []).append(pt)
    components = tuple(
        tuple(sorted(group)) for group in sorted(groups.values(), key=min)
    )
    return SublevelComplex(
        level=level, points=frozenset(points), components=components
    )


@dataclass(frozen=True)
class CrossCheckRow:
    orbit: SpinCOrbit
    homology_dim: int
    ker_u_rank: int

    @property
    def matches(self) -> bool:
        return self.homology_dim == self.ker_u_rank


@dataclass(frozen=True)
class CrossCheckReport:
    ok: bool
    rows: tuple[CrossCheckRow, ...]


def ker_u_cross_check(
    forest: PlumbingForest,
    *,
    point_cap: int = DEFAULT_POINT_CAP,
    box_cap: int = DEFAULT_BOX_CAP,
) -> CrossCheckReport:
    """Compare per-orbit quotient dimensions against kernel-of-U ranks.

    The two engines share nothing past the box: one quotients characteristic
    vectors by signed reflections, the other counts component births of the
    weight filtration, so agreement is a genuine two-route check.  The box
    is grouped into orbits once, not once per orbit.
    """
    homology = compute_homology(forest, box_cap=box_cap)
    reps = [oh.orbit.representative for oh in homology.per_orbit]
    if forest.edge_sign is EdgeSign.PLUS_ONE:
        plus, moved = forest, tuple(reps)
    else:
        conv = convert_convention(forest, reps)
        plus, moved = conv.forest, conv.vectors
    form = intersection_form(plus)
    indexer = OrbitIndexer(form)
    members_by_key: dict[tuple[int, ...], list[Point]] = {}
    for evals in product(*box_ranges(form)):
        members_by_key.setdefault(indexer.key(evals), []).append(evals)
    rows = []
    for oh, rep_plus in zip(homology.per_orbit, moved):
        grading = _OrbitGrading(plus, form, rep_plus)
        members = members_by_key[indexer.key(rep_plus)]
        minima = grading.minima_from_members(members)
        births = _birth_counts(grading, minima)
        rows.append(
            CrossCheckRow(
                orbit=oh.orbit,
                homology_dim=oh.dim,
                ker_u_rank=sum(births.values()),
            )
        )
    return CrossCheckReport(ok=all(r.matches for r in rows), rows=tuple(rows))


def rational_via_hplus(
    forest: PlumbingForest,
    *,
    point_cap: int = DEFAULT_POINT_CAP,
    box_cap: int = DEFAULT_BOX_CAP,
) -> bool:
    """Whether every orbit shows the single-tower shape.

    True iff each orbit has kernel rank one; since every component of every
    sublevel set contains a newborn core, a single birth already forces rank
    one at every level, which is the single-tower shape at the component
    level.  A cross-check against the direct definition-based rationality
    test, not the primary test; deliberately shares nothing with either the
    quotient engine or the chi ellipsoid (orbits are grouped here directly).
    """
    del point_cap  # births never need the sweep
    if forest.edge_sign is EdgeSign.PLUS_ONE:
        plus = forest
    else:
        plus = convert_convention(forest).forest
    form = intersection_form(plus)
    if not form.is_negative_definite:
        raise NotNegativeDefinite("rationality cross-check needs negative definiteness")
    size = 1
    ranges = box_ranges(form)
    for r in ranges:
        size *= len(r)
    if size > box_cap:
        raise BoxTooLarge(f"box holds {size} vectors, cap is {box_cap}")
    indexer = OrbitIndexer(form)
    members_by_key: dict[tuple[int, ...], list[Point]] = {}
    for evals in product(*ranges):
        members_by_key.setdefault(indexer.key(evals), []).append(evals)
    for members in members_by_key.values():
        grading = _OrbitGrading(plus, form, CharVector(min(members)))
        minima = grading.minima_from_members(members)
        if sum(_birth_counts(grading, minima).values()) != 1:
            return False
    return True
