"""Graph moves and the maps they induce on lattice homology.

Three families live here:

* the surgery triple at a vertex v of framing -p: deleting v, keeping the
  graph, and bumping the framing to -p + 1 give a short exact sequence of
  quotients, realized by the extension-sum map into the middle graph, the
  half-shift difference map out of it, and an explicit section of the latter
  that certifies surjectivity;
* blowing down a (-1)-framed leaf or isolated vertex, realized as a basis
  change (sliding the neighbor over the leaf) followed by splitting off the
  isolated (-1) vertex, which together give a signed bijection on nonzero
  classes;
* the edge-sign conversion: forests are bipartite, so negating evaluations on
  one side of a 2-coloring transports vectors between the -1 and +1 pairing
  conventions without changing any dimension.

All induced maps are materialized as exact rational matrices over the class
bases of the quotient engine; ranks come from exact elimination, so the
exactness report carries no tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .charlattice import CharVector, DEFAULT_BOX_CAP, OrbitIndexer, in_box
from .errors import (
    InternalInvariantViolation,
    InvalidTriple,
    NotBlowdownable,
)
from .homology import HomologyResult, class_of, compute_homology
from .intlinalg import rank_rational
from .plumbing import EdgeSign, IntersectionForm, PlumbingForest, intersection_form


# --- formal sums ---------------------------------------------------------

@dataclass(frozen=True)
class FormalSum:
    """Finite rational combination of characteristic vectors."""

    terms: tuple[tuple[Fraction, CharVector], ...]

    @staticmethod
    def of(pairs: Iterable[tuple[Fraction | int, CharVector]]) -> "FormalSum":
        combined: dict[tuple[int, ...], Fraction] = {}
        for coeff, vec in pairs:
            key = vec.evals
            combined[key] = combined.get(key, Fraction(0)) + Fraction(coeff)
        terms = tuple(
            (coeff, CharVector(evals))
            for evals, coeff in sorted(combined.items())
            if coeff
        )
        return FormalSum(terms)

    def scale(self, factor: Fraction | int) -> "FormalSum":
        return FormalSum.of((Fraction(factor) * c, v) for c, v in self.terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum.of(list(self.terms) + list(other.terms))

    def is_zero(self) -> bool:
        return not self.terms


def truncate_to_box(fs: FormalSum, form: IntersectionForm) -> FormalSum:
    """Drop terms that die by the out-of-range vanishing relation."""
    return FormalSum.of(
        (c, v) for c, v in fs.terms if in_box(v.evals, form)
    )


def apply_linear(
    mapping: Callable[[CharVector], FormalSum], fs: FormalSum
) -> FormalSum:
    out = FormalSum.of(())
    for coeff, vec in fs.terms:
        out = out + mapping(vec).scale(coeff)
    return out


# --- surgery triples ------------------------------------------------------

@dataclass(frozen=True)
class SurgeryTriple:
    """The graphs (base - v, base, base with framing of v bumped by one).

    ``valid`` records whether all three intersection forms are negative
    definite; the maps below are still computable on an invalid triple, but
    the exactness checker refuses it.
    """

    base: PlumbingForest
    vertex: str
    vertex_index: int
    removed: PlumbingForest
    bumped: PlumbingForest
    valid: bool


def surgery_triple(forest: PlumbingForest, vertex_id: str) -> SurgeryTriple:
    vi = forest.index_of(vertex_id)
    removed = forest.delete_vertex(vi)
    bumped = forest.with_framing(vi, forest.framings[vi] + 1)
    valid = all(
        intersection_form(g).is_negative_definite
        for g in (forest, removed, bumped)
    )
    return SurgeryTriple(
        base=forest,
        vertex=vertex_id,
        vertex_index=vi,
        removed=removed,
        bumped=bumped,
        valid=valid,
    )


def add_vertex_map(k: CharVector, triple: SurgeryTriple) -> FormalSum:
    """Sum of all extensions of k across the new vertex, |value| <= -v^2.

    Extensions with larger evaluation at v vanish in the quotient, so the
    truncation loses nothing.
    """
    vi = triple.vertex_index
    p = -triple.base.framings[vi]
    evals = k.evals
    pairs = []
    for value in range(-p, p + 1, 2):
        extended = evals[:vi] + (value,) + evals[vi:]
        pairs.append((1, CharVector(extended)))
    return FormalSum.of(pairs)


def bump_framing_map(k: CharVector, triple: SurgeryTriple) -> FormalSum:
    """(-1/2) k^+ + (1/2) k^- on the framing-bumped graph."""
    vi = triple.vertex_index
    evals = k.evals
    up = evals[:vi] + (evals[vi] + 1,) + evals[vi + 1 :]
    down = evals[:vi] + (evals[vi] - 1,) + evals[vi + 1 :]
    return FormalSum.of(
        [(Fraction(-1, 2), CharVector(up)), (Fraction(1, 2), CharVector(down))]
    )


def bump_framing_section(k: CharVector, triple: SurgeryTriple) -> FormalSum:
    """2 * (sum of extensions with values above <k, v>), a section of the
    half-shift map modulo the image of the extension sum."""
    vi = triple.vertex_index
    p = -triple.base.framings[vi]
    evals = k.evals
    pairs = []
    for value in range(evals[vi] + 1, p + 1, 2):
        lifted = evals[:vi] + (value,) + evals[vi + 1 :]
        pairs.append((2, CharVector(lifted)))
    return FormalSum.of(pairs)


def project_to_classes(fs: FormalSum, result: HomologyResult) -> list[Fraction]:
    """Coordinates of a formal sum in the nonzero class basis."""
    coords = [Fraction(0)] * result.total_dim
    for coeff, vec in fs.terms:
        ref = class_of(vec, result)
        if not ref.is_zero:
            coords[ref.index] += coeff * ref.sign
    return coords


@dataclass(frozen=True)
class ExactnessReport:
    b_surjective: bool
    ba_zero: bool
    ker_b_equals_im_a: bool
    section_inverts_b: bool
    dims: tuple[int, int, int]  # (removed, base, bumped)

    @property
    def exact(self) -> bool:
        return (
            self.b_surjective
            and self.ba_zero
            and self.ker_b_equals_im_a
            and self.section_inverts_b
        )


def check_exactness(
    triple: SurgeryTriple, *, box_cap: int = DEFAULT_BOX_CAP
) -> ExactnessReport:
    """Verify exactness of the quotient sequence through the triple.

    Builds the three quotients, materializes the two maps (and the section)
    as rational matrices over class bases, and checks surjectivity, that the
    composite vanishes, and the rank identity ker = image.
    """
    if not triple.valid:
        raise InvalidTriple(
            f"bumping {triple.vertex!r} leaves the negative-definite world"
        )
    h_removed = compute_homology(triple.removed, box_cap=box_cap)
    h_base = compute_homology(triple.base, box_cap=box_cap)
    h_bumped = compute_homology(triple.bumped, box_cap=box_cap)

    cols_a = [
        project_to_classes(add_vertex_map(cls.representative, triple), h_base)
        for cls in h_removed.classes
    ]
    cols_b = [
        project_to_classes(bump_framing_map(cls.representative, triple), h_bumped)
        for cls in h_base.classes
    ]
    cols_s = [
        project_to_classes(bump_framing_section(cls.representative, triple), h_base)
        for cls in h_bumped.classes
    ]

    def matmul(left: list[list[Fraction]], right: list[list[Fraction]]) -> list[list[Fraction]]:
        # matrices are stored column-wise: (M N) column j = M applied to N[:, j]
        out = []
        for col in right:
            acc = [Fraction(0)] * (len(left[0]) if left else 0)
            for coeff, lcol in zip(col, left):
                if coeff:
                    for i, v in enumerate(lcol):
                        acc[i] += coeff * v
            out.append(acc)
        return out

    ba = matmul(cols_b, cols_a) if cols_a else []
    ba_zero = all(all(v == 0 for v in col) for col in ba)

    bs = matmul(cols_b, cols_s) if cols_s else []
    section_ok = all(
        all(v == (1 if i == j else 0) for i, v in enumerate(col))
        for j, col in enumerate(bs)
    )

    rank_b = rank_rational(cols_b) if cols_b else 0
    rank_a = rank_rational(cols_a) if cols_a else 0
    report = ExactnessReport(
        b_surjective=(rank_b == h_bumped.total_dim),
        ba_zero=ba_zero,
        ker_b_equals_im_a=(rank_a == h_base.total_dim - rank_b),
        section_inverts_b=section_ok,
        dims=(h_removed.total_dim, h_base.total_dim, h_bumped.total_dim),
    )
    return report


# --- edge-sign conversion --------------------------------------------------

@dataclass(frozen=True)
class ConventionConversion:
    forest: PlumbingForest
    vectors: tuple[CharVector, ...]
    negated: tuple[bool, ...]  # True on the bipartition side whose evals flip


def bipartition(forest: PlumbingForest) -> tuple[bool, ...]:
    """Deterministic 2-coloring; the smallest index of a component is False."""
    n = len(forest)
    color: list[bool | None] = [None] * n
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in forest.edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    for start in range(n):
        if color[start] is not None:
            continue
        color[start] = False
        stack = [start]
        while stack:
            node = stack.pop()
            for other in adjacency[node]:
                if color[other] is None:
                    color[other] = not color[node]
                    stack.append(other)
    return tuple(bool(c) for c in color)


def convert_convention(
    forest: PlumbingForest, vectors: Sequence[CharVector] = ()
) -> ConventionConversion:
    """Flip the edge sign and transport vectors by the bipartite negation."""
    mask = bipartition(forest)
    flipped = EdgeSign.PLUS_ONE if forest.edge_sign is EdgeSign.MINUS_ONE else EdgeSign.MINUS_ONE
    moved = tuple(
        CharVector(
            tuple(-e if mask[i] else e for i, e in enumerate(v.evals))
        )
        for v in vectors
    )
    return ConventionConversion(
        forest=forest.with_edge_sign(flipped), vectors=moved, negated=mask
    )


def sign_normalization(
    k: CharVector, k0: CharVector, form: IntersectionForm
) -> int:
    """Sign of the basis change that removes the framing-parity factor.

    Writing k = k0 + sum_i c_i 2v_i*, the sign is (-1) to the sum of the c_i
    over odd-framed vertices; conjugating generators by it turns the signed
    extremal reflections into unsigned ones.
    """
    coords = OrbitIndexer(form).lattice_coordinates(k, k0).coords
    exponent = sum(
        c for i, c in enumerate(coords) if form.matrix[i][i] % 2
    )
    return -1 if exponent % 2 else 1


# --- blow-down --------------------------------------------------------------

@dataclass(frozen=True)
class BlowdownResult:
    """Blown-down forest plus the verified signed class bijection.

    ``class_map`` sends each nonzero class index of the source quotient to
    (target class index, sign).  The attached homology results are computed
    in the -1 edge convention, where the two elementary isomorphisms are
    defined; dimensions are convention-independent.
    """

    forest: PlumbingForest
    class_map: tuple[tuple[int, int, int], ...]
    source: HomologyResult
    target: HomologyResult


def blow_down(
    forest: PlumbingForest, vertex_id: str, *, box_cap: int = DEFAULT_BOX_CAP
) -> BlowdownResult:
    """Remove a (-1)-framed leaf or isolated vertex, bumping its neighbor.

    The induced map on quotients is the composite of the handleslide basis
    change with the splitting-off of the isolated (-1) vertex; it is verified
    here to be a signed bijection on nonzero classes preserving per-orbit
    dimensions.  Interior (-1) vertices (degree >= 2) are refused: that move
    changes the edge set and carries no elementary map of this shape.
    """
    xi = forest.index_of(vertex_id)
    if forest.framings[xi] != -1:
        raise NotBlowdownable(f"vertex {vertex_id!r} has framing != -1")
    neighbors = forest.neighbors(xi)
    if len(neighbors) > 1:
        raise NotBlowdownable(f"vertex {vertex_id!r} has degree {len(neighbors)} >= 2")

    original_sign = forest.edge_sign
    work = (
        forest
        if original_sign is EdgeSign.MINUS_ONE
        else convert_convention(forest).forest
    )

    if neighbors:
        vi = neighbors[0]
        blown = work.with_framing(vi, work.framings[vi] + 1).delete_vertex(xi)
    else:
        vi = None
        blown = work.delete_vertex(xi)

    source = compute_homology(work, box_cap=box_cap)
    target = compute_homology(blown, box_cap=box_cap)

    def image_of(k: CharVector) -> tuple[tuple[int, ...], int]:
        evals = k.evals
        kx = evals[xi]
        if kx not in (1, -1):
            raise InternalInvariantViolation("box value at a (-1) vertex must be +-1")
        adjusted = list(evals)
        if vi is not None:
            adjusted[vi] = adjusted[vi] - kx  # slide the neighbor over the leaf
        del adjusted[xi]
        return tuple(adjusted), kx

    mapping: list[tuple[int, int, int]] = []
    seen_targets: dict[int, int] = {}
    orbit_pairs: dict[int, int] = {}
    src_indexer = OrbitIndexer(source.form)
    dst_indexer = OrbitIndexer(target.form)
    src_orbit_index = {
        src_indexer.key(oh.orbit.representative): oh.orbit.index
        for oh in source.per_orbit
    }
    dst_orbit_index = {
        dst_indexer.key(oh.orbit.representative): oh.orbit.index
        for oh in target.per_orbit
    }
    for cls_id, cls in enumerate(source.classes):
        img_evals, coeff = image_of(cls.representative)
        ref = class_of(img_evals, target)
        if ref.is_zero:
            raise InternalInvariantViolation(
                "blow-down sent a nonzero class to zero"
            )
        if ref.index in seen_targets:
            raise InternalInvariantViolation("blow-down map is not injective")
        seen_targets[ref.index] = cls_id
        mapping.append((cls_id, ref.index, coeff * ref.sign))
        src_orbit = src_orbit_index[src_indexer.key(cls.representative)]
        dst_orbit = dst_orbit_index[dst_indexer.key(CharVector(img_evals))]
        if orbit_pairs.setdefault(src_orbit, dst_orbit) != dst_orbit:
            raise InternalInvariantViolation(
                "blow-down scattered one orbit across several targets"
            )
    if len(seen_targets) != target.total_dim:
        raise InternalInvariantViolation(
            f"blow-down map hits {len(seen_targets)} of {target.total_dim} classes"
        )
    by_src = {oh.orbit.index: oh.dim for oh in source.per_orbit}
    by_dst = {oh.orbit.index: oh.dim for oh in target.per_orbit}
    for src_orbit, dst_orbit in orbit_pairs.items():
        if by_src[src_orbit] != by_dst[dst_orbit]:
            raise InternalInvariantViolation("per-orbit dimension changed under blow-down")

    result_forest = (
        blown
        if original_sign is EdgeSign.MINUS_ONE
        else blown.with_edge_sign(EdgeSign.PLUS_ONE)
    )
    return BlowdownResult(
        forest=result_forest,
        class_map=tuple(mapping),
        source=source,
        target=target,
    )


def slide_leaf_basis_change(
    k: CharVector, forest: PlumbingForest, leaf_id: str
) -> CharVector:
    """Evaluations after the handleslide v -> v - x over the leaf x."""
    xi = forest.index_of(leaf_id)
    neighbors = forest.neighbors(xi)
    if len(neighbors) != 1:
        raise NotBlowdownable(f"{leaf_id!r} is not a leaf")
    vi = neighbors[0]
    evals = list(k.evals)
    evals[vi] -= evals[xi]
    return CharVector(tuple(evals))


def unslide_leaf_basis_change(
    k: CharVector, forest: PlumbingForest, leaf_id: str
) -> CharVector:
    """Inverse of :func:`slide_leaf_basis_change`."""
    xi = forest.index_of(leaf_id)
    neighbors = forest.neighbors(xi)
    if len(neighbors) != 1:
        raise NotBlowdownable(f"{leaf_id!r} is not a leaf")
    vi = neighbors[0]
    evals = list(k.evals)
    evals[vi] += evals[xi]
    return CharVector(tuple(evals))
