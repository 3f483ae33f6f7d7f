"""Lattice homology of a negative-definite plumbing forest.

The quotient is generated by the finite box of characteristic vectors,
subject to two families of relations at each vertex v:

* out-of-range vanishing: a vector with |<k, v>| > -v^2 is zero -- such
  vectors never enter the box, but reflection targets may leave it;
* extremal reflection: a vector with <k, v> = +-v^2 is identified with
  (-1)^{v^2} (k -+ 2v*).

Since every relation is monomial (k ~ +-k'), the quotient dimension over any
field of characteristic != 2 is the number of sign-consistent classes not
identified with zero.  A union-find with signs on the parent pointers
computes this exactly in near-linear time: a sign conflict inside a class
(k ~ -k) or any reflection escaping the box sends the class to a single
global zero node.  The outcome is independent of processing order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .charlattice import (
    DEFAULT_BOX_CAP,
    CharVector,
    OrbitIndexer,
    SpinCOrbit,
    box_ranges,
    box_size,
    in_box,
)
from .errors import (
    BoxTooLarge,
    InternalInvariantViolation,
    NegativeOddDimension,
    NotNegativeDefinite,
)
from .plumbing import EdgeSign, IntersectionForm, PlumbingForest, intersection_form


class SignedUnionFind:
    """Union-find whose parent pointers carry a sign in {+1, -1}."""

    __slots__ = ("parent", "sign", "rank")

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.sign = [1] * size
        self.rank = [0] * size

    def find(self, a: int) -> tuple[int, int]:
        """Root of a and the sign s with val(a) = s * val(root)."""
        parent = self.parent
        sign = self.sign
        path = []
        while parent[a] != a:
            path.append(a)
            a = parent[a]
        s = 1
        # walk back towards the query node, accumulating signs root-ward and
        # re-hanging every path node directly off the root
        for node in reversed(path):
            s *= sign[node]
            parent[node] = a
            sign[node] = s
        return a, s

    def union(self, a: int, b: int, rel: int) -> bool:
        """Impose val(a) = rel * val(b); False reports a sign conflict."""
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        if ra == rb:
            return sa == rel * sb
        # val(ra) = (sa * rel * sb) * val(rb)
        s = sa * rel * sb
        if self.rank[ra] < self.rank[rb]:
            self.parent[ra] = rb
            self.sign[ra] = s
        elif self.rank[ra] > self.rank[rb]:
            self.parent[rb] = ra
            self.sign[rb] = s
        else:
            self.parent[rb] = ra
            self.sign[rb] = s
            self.rank[ra] += 1
        return True


@dataclass(frozen=True)
class ClassRef:
    """Location of a vector in the quotient: class index (None = zero), sign."""

    index: int | None
    sign: int

    @property
    def is_zero(self) -> bool:
        return self.index is None


ZERO = ClassRef(index=None, sign=1)


@dataclass(frozen=True)
class SignedClass:
    """A quotient class: members carry signs relative to the representative."""

    representative: CharVector | None
    members: tuple[tuple[CharVector, int], ...]
    is_zero: bool = False


@dataclass(frozen=True)
class OrbitHomology:
    orbit: SpinCOrbit
    dim: int
    representatives: tuple[CharVector, ...]


@dataclass(frozen=True, eq=False)
class HomologyResult:
    """Quotient dimensions per spin^c orbit, with class lookup tables."""

    forest: PlumbingForest
    form: IntersectionForm
    convention: EdgeSign
    total_dim: int
    per_orbit: tuple[OrbitHomology, ...]
    classes: tuple[SignedClass, ...]
    zero_class: SignedClass
    _lookup: dict = field(repr=False)

    @property
    def det_abs(self) -> int:
        return abs(self.form.determinant)


def compute_homology(
    forest: PlumbingForest,
    *,
    box_cap: int = DEFAULT_BOX_CAP,
    signed: bool = True,
) -> HomologyResult:
    """Quotient of the box by the reflection relations, per orbit.

    ``signed=False`` drops the (-1)^{v^2} factor from the reflections; the
    dimensions agree with the signed version, which is asserted structurally
    elsewhere rather than assumed here.
    """
    form = intersection_form(forest)
    if not form.is_negative_definite:
        raise NotNegativeDefinite(
            "lattice homology is defined for negative-definite forests only"
        )
    n = len(forest)
    size = box_size(form)
    if size > box_cap:
        raise BoxTooLarge(f"box holds {size} vectors, cap is {box_cap}")

    framings = forest.framings
    box = list(product(*box_ranges(form)))
    index = {k: i for i, k in enumerate(box)}
    zero_node = len(box)
    uf = SignedUnionFind(len(box) + 1)
    double_rows = [
        tuple(2 * form.matrix[i][j] for j in range(n)) for i in range(n)
    ]

    def unite(a: int, b: int, rel: int) -> None:
        if not uf.union(a, b, rel):
            # k ~ -k forces the class to zero (coefficients have char != 2)
            uf.union(a, zero_node, 1) or uf.union(a, zero_node, -1)

    for idx, k in enumerate(box):
        for i in range(n):
            m = framings[i]
            if k[i] == m:
                row = double_rows[i]
                target = tuple(k[j] - row[j] for j in range(n))
            elif k[i] == -m:
                row = double_rows[i]
                target = tuple(k[j] + row[j] for j in range(n))
            else:
                continue
            rel = -1 if (signed and m % 2) else 1
            tidx = index.get(target)
            if tidx is None:
                unite(idx, zero_node, 1)
            else:
                unite(idx, tidx, rel)

    zero_root, _ = uf.find(zero_node)
    groups: dict[int, list[int]] = {}
    zero_members: list[int] = []
    for idx in range(len(box)):
        root, _ = uf.find(idx)
        if root == zero_root:
            zero_members.append(idx)
        else:
            groups.setdefault(root, []).append(idx)

    ordered = sorted(groups.values(), key=lambda idxs: min(box[i] for i in idxs))
    classes: list[SignedClass] = []
    lookup: dict[tuple[int, ...], tuple[int | None, int]] = {}
    for cls_id, idxs in enumerate(ordered):
        rep_idx = min(idxs, key=lambda i: box[i])
        _, rep_sign = uf.find(rep_idx)
        members = []
        for i in sorted(idxs, key=lambda i: box[i]):
            _, s = uf.find(i)
            rel = s * rep_sign  # val(i) = (s / rep_sign) val(rep); signs are involutive
            members.append((CharVector(box[i]), rel))
            lookup[box[i]] = (cls_id, rel)
        classes.append(
            SignedClass(
                representative=CharVector(box[rep_idx]),
                members=tuple(members),
            )
        )
    for i in zero_members:
        lookup[box[i]] = (None, 1)
    zero_class = SignedClass(
        representative=None,
        members=tuple((CharVector(box[i]), 1) for i in zero_members),
        is_zero=True,
    )

    indexer = OrbitIndexer(form)
    orbit_of_key: dict[tuple[int, ...], list[int]] = {}
    for cls_id, cls in enumerate(classes):
        orbit_of_key.setdefault(indexer.key(cls.representative), []).append(cls_id)
    # orbits are read off the box so empty orbits cannot hide
    all_keys: dict[tuple[int, ...], tuple[int, ...]] = {}
    for k in box:
        key = indexer.key(k)
        if key not in all_keys or k < all_keys[key]:
            all_keys[key] = k
    det_abs = abs(form.determinant)
    if len(all_keys) != det_abs:
        raise InternalInvariantViolation(
            f"box met {len(all_keys)} orbits, |det| = {det_abs}"
        )
    per_orbit = []
    for orbit_index, (key, rep) in enumerate(
        sorted(all_keys.items(), key=lambda kv: kv[1])
    ):
        cls_ids = sorted(
            orbit_of_key.get(key, ()),
            key=lambda c: classes[c].representative.evals,
        )
        if not cls_ids:
            raise InternalInvariantViolation(
                f"orbit of {rep} has dimension 0; every orbit carries a generator"
            )
        per_orbit.append(
            OrbitHomology(
                orbit=SpinCOrbit(representative=CharVector(rep), index=orbit_index),
                dim=len(cls_ids),
                representatives=tuple(
                    classes[c].representative for c in cls_ids
                ),
            )
        )

    total_dim = len(classes)
    if total_dim < det_abs:
        raise InternalInvariantViolation(
            f"total dimension {total_dim} fell below |det| = {det_abs}"
        )
    if total_dim != sum(o.dim for o in per_orbit):
        raise InternalInvariantViolation("per-orbit dimensions do not add up")

    return HomologyResult(
        forest=forest,
        form=form,
        convention=forest.edge_sign,
        total_dim=total_dim,
        per_orbit=tuple(per_orbit),
        classes=tuple(classes),
        zero_class=zero_class,
        _lookup=lookup,
    )


def class_of(k: CharVector | Sequence[int], result: HomologyResult) -> ClassRef:
    """Class and relative sign of a characteristic vector; ZERO off the box."""
    evals = k.evals if isinstance(k, CharVector) else tuple(k)
    if not in_box(evals, result.form):
        return ZERO
    entry = result._lookup.get(evals)
    if entry is None:
        raise KeyError(f"{evals} is not a box vector of this forest")
    idx, sign = entry
    if idx is None:
        return ZERO
    return ClassRef(index=idx, sign=sign)


@dataclass(frozen=True)
class DerivedDimensions:
    """Floer-theoretic dimensions implied by the lattice data.

    For an almost-rational forest the even summand of the framed instanton
    homology of the boundary has the lattice dimension; the Euler
    characteristic |H_1| then pins the odd summand, the total, and the
    Heegaard Floer hat dimension.  Without that certification the numbers are
    flagged as conjectural.
    """

    dim_isharp_even: int
    dim_isharp_odd: int
    dim_isharp: int
    dim_hfhat: int
    is_instanton_lspace: bool
    conjectural: bool


def derived_dimensions(
    result: HomologyResult,
    *,
    almost_rational_certified: bool | None = None,
) -> DerivedDimensions:
    det = result.det_abs
    total = result.total_dim
    if total < det:
        raise NegativeOddDimension(
            f"dimension {total} below |det| = {det}: lower-bound invariant broken"
        )
    return DerivedDimensions(
        dim_isharp_even=total,
        dim_isharp_odd=total - det,
        dim_isharp=2 * total - det,
        dim_hfhat=2 * total - det,
        is_instanton_lspace=(total == det),
        conjectural=not bool(almost_rational_certified),
    )
