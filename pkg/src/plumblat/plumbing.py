"""Plumbing forests and their intersection forms.

A plumbing forest is an acyclic graph whose vertices carry integer framings.
It encodes a 4-manifold built from disk bundles over spheres; the symmetric
intersection form has the framings on the diagonal and, for each edge, an
off-diagonal entry equal to the forest's edge sign.  Both the ``-1`` and the
standard ``+1`` edge conventions are supported; the convention is part of the
data of the forest.

All arithmetic is exact.  Definiteness is certified through leading principal
minors ((-1)^k * minor_k > 0 for every k is equivalent to negative
definiteness), and the degenerate direction of a zero-bad-vertex forest is
located combinatorially: a connected component with -m(v) = d(v) throughout
is a plumbing description of S^1 x S^2, and is the only way such a forest can
fail to be negative definite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from . import intlinalg
from .errors import (
    CycleDetected,
    DanglingEdge,
    DuplicateEdge,
    DuplicateVertexId,
    NotApplicable,
    SelfLoop,
)


class EdgeSign(Enum):
    """Pairing of adjacent vertices: the stored off-diagonal entry."""

    MINUS_ONE = -1
    PLUS_ONE = 1


class Definiteness(Enum):
    NEGATIVE_DEFINITE = "negative_definite"
    NEGATIVE_SEMIDEFINITE = "negative_semidefinite"
    # Anything failing negative semidefiniteness is reported here, including
    # positive-definite forms; the calculators only care about the negative side.
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class PlumbingForest:
    """Immutable validated plumbing forest.

    ``ids`` and ``framings`` run in input order; ``edges`` holds index pairs
    (i, j) with i < j.  Construct through :func:`validate_forest`.
    """

    ids: tuple[str, ...]
    framings: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    edge_sign: EdgeSign = EdgeSign.MINUS_ONE

    def __len__(self) -> int:
        return len(self.ids)

    def index_of(self, vertex_id: str) -> int:
        try:
            return self.ids.index(vertex_id)
        except ValueError:
            raise KeyError(f"unknown vertex id {vertex_id!r}") from None

    def degree(self, i: int) -> int:
        return sum(1 for a, b in self.edges if a == i or b == i)

    def degrees(self) -> list[int]:
        degs = [0] * len(self.ids)
        for a, b in self.edges:
            degs[a] += 1
            degs[b] += 1
        return degs

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def components(self) -> list[list[int]]:
        """Connected components as sorted index lists, sorted by first vertex."""
        n = len(self.ids)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])

    def with_framing(self, i: int, framing: int) -> "PlumbingForest":
        framings = list(self.framings)
        framings[i] = framing
        return PlumbingForest(self.ids, tuple(framings), self.edges, self.edge_sign)

    def delete_vertex(self, i: int) -> "PlumbingForest":
        ids = tuple(v for j, v in enumerate(self.ids) if j != i)
        framings = tuple(m for j, m in enumerate(self.framings) if j != i)

        def shift(j: int) -> int:
            return j - 1 if j > i else j

        edges = tuple(
            (shift(a), shift(b)) for a, b in self.edges if a != i and b != i
        )
        return PlumbingForest(ids, framings, edges, self.edge_sign)

    def with_edge_sign(self, edge_sign: EdgeSign) -> "PlumbingForest":
        return PlumbingForest(self.ids, self.framings, self.edges, edge_sign)


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric integer matrix of a forest with its exact certificates."""

    matrix: tuple[tuple[int, ...], ...]
    determinant: int
    definiteness: Definiteness
    leading_minors: tuple[int, ...]
    edge_sign: EdgeSign

    def __len__(self) -> int:
        return len(self.matrix)

    @property
    def is_negative_definite(self) -> bool:
        return self.definiteness is Definiteness.NEGATIVE_DEFINITE


@dataclass(frozen=True)
class CanonicalClass:
    """The characteristic functional with value -m(v) - 2 on every vertex."""

    evals: tuple[int, ...]


@dataclass(frozen=True)
class SemidefiniteVerdict:
    kind: str  # "negative_definite" | "s1_x_s2_component"
    component: tuple[str, ...] = field(default=())


def validate_forest(
    vertices: Iterable[tuple[str, int]],
    edges: Iterable[tuple[str, str]] = (),
    edge_sign: EdgeSign = EdgeSign.MINUS_ONE,
) -> PlumbingForest:
    """Validate raw vertex/edge data into a :class:`PlumbingForest`.

    Rejects duplicate vertex ids, self-loops, dangling or duplicate edges and
    cycles.  Duplicate edges are an error rather than being deduplicated:
    silently merging them would hide a likely mistake in the input.
    """
    ids: list[str] = []
    framings: list[int] = []
    index: dict[str, int] = {}
    for vid, m in vertices:
        if vid in index:
            raise DuplicateVertexId(f"vertex id {vid!r} appears twice")
        index[vid] = len(ids)
        ids.append(vid)
        framings.append(int(m))

    parent = list(range(len(ids)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seen: set[tuple[int, int]] = set()
    out_edges: list[tuple[int, int]] = []
    for a, b in edges:
        if a == b:
            raise SelfLoop(f"edge ({a!r}, {b!r}) is a self-loop")
        if a not in index or b not in index:
            raise DanglingEdge(f"edge ({a!r}, {b!r}) references a missing vertex")
        i, j = sorted((index[a], index[b]))
        if (i, j) in seen:
            raise DuplicateEdge(f"edge ({a!r}, {b!r}) appears twice")
        seen.add((i, j))
        ri, rj = find(i), find(j)
        if ri == rj:
            raise CycleDetected(f"edge ({a!r}, {b!r}) closes a cycle")
        parent[ri] = rj
        out_edges.append((i, j))
    return PlumbingForest(tuple(ids), tuple(framings), tuple(out_edges), edge_sign)


def intersection_form(forest: PlumbingForest) -> IntersectionForm:
    """Intersection matrix, exact determinant and definiteness certificate."""
    n = len(forest)
    rows = [[0] * n for _ in range(n)]
    for i, m in enumerate(forest.framings):
        rows[i][i] = m
    off = forest.edge_sign.value
    for a, b in forest.edges:
        rows[a][b] = off
        rows[b][a] = off
    minors = intlinalg.leading_principal_minors(rows)
    det = minors[-1] if minors else 1
    if all((-1) ** (k + 1) * minors[k] > 0 for k in range(n)):
        definiteness = Definiteness.NEGATIVE_DEFINITE
    else:
        negated = [[-x for x in row] for row in rows]
        kind = intlinalg.psd_classify(negated)
        if kind == intlinalg.POSITIVE_SEMIDEFINITE:
            definiteness = Definiteness.NEGATIVE_SEMIDEFINITE
        elif kind == intlinalg.POSITIVE_DEFINITE:
            definiteness = Definiteness.NEGATIVE_DEFINITE
        else:
            definiteness = Definiteness.INDEFINITE
    return IntersectionForm(
        matrix=tuple(tuple(row) for row in rows),
        determinant=det,
        definiteness=definiteness,
        leading_minors=tuple(minors),
        edge_sign=forest.edge_sign,
    )


def bad_vertices(forest: PlumbingForest) -> list[str]:
    """Vertices whose framing is too shallow for their degree: -m(v) < d(v)."""
    degs = forest.degrees()
    return [
        forest.ids[i]
        for i in range(len(forest))
        if -forest.framings[i] < degs[i]
    ]


def canonical_class(forest: PlumbingForest) -> CanonicalClass:
    return CanonicalClass(tuple(-m - 2 for m in forest.framings))


def semidefinite_classify(forest: PlumbingForest) -> SemidefiniteVerdict:
    """Classify a zero-bad-vertex forest.

    Such a forest is automatically negative semidefinite; it is negative
    definite unless some connected component satisfies -m(v) = d(v) at every
    vertex, in which case that component describes S^1 x S^2 and is reported.
    Raises NotApplicable if the forest has bad vertices.
    """
    bad = bad_vertices(forest)
    if bad:
        raise NotApplicable(f"forest has bad vertices: {bad}")
    degs = forest.degrees()
    for comp in forest.components():
        if all(-forest.framings[i] == degs[i] for i in comp):
            return SemidefiniteVerdict(
                kind="s1_x_s2_component",
                component=tuple(forest.ids[i] for i in comp),
            )
    form = intersection_form(forest)
    if not form.is_negative_definite:
        # unreachable for valid inputs: a 0-bad-vertex forest without a
        # fully degenerate component is always negative definite
        return SemidefiniteVerdict(kind="indefinite")
    return SemidefiniteVerdict(kind="negative_definite")
