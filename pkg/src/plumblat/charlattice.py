"""Characteristic vectors, spin^c orbits, and lattice coordinates.

A characteristic vector is an integer functional k on the vertex lattice with
<k, x> congruent to (x, x) mod 2; it is stored through its evaluations on the
vertex basis.  For a negative-definite form, every functional that is nonzero
in the quotient homology satisfies v^2 <= <k, v> <= -v^2 on every vertex, so
the finite "box" of such evaluations carries all generators.

Orbits of the translation action k -> k + 2x* partition the characteristic
vectors; distinct orbits correspond to spin^c structures on the boundary and
there are exactly |det| of them, each meeting the box.  Orbit membership is
decided exactly: k and k' lie in the same orbit iff A^{-1}(k' - k)/2 is an
integer vector, tested with the integer adjugate so no rationals appear in
the hot path.

The weight function w(x) = -((x, x) + <k0, x>)/2, taken in the +1 edge
convention, turns lattice points into the filtration that drives the graded
cross-check engine; its local minima correspond exactly to box vectors of the
orbit of k0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import intlinalg
from .errors import (
    BoxTooLarge,
    InternalInvariantViolation,
    NotNegativeDefinite,
    ParityViolation,
)
from .plumbing import CanonicalClass, EdgeSign, IntersectionForm

DEFAULT_BOX_CAP = 10**8


@dataclass(frozen=True)
class CharVector:
    """Evaluations of an integer functional on the vertex basis.

    The characteristic parity invariant is checked by
    :func:`is_characteristic` where it matters, not by the container.
    """

    evals: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.evals)


@dataclass(frozen=True)
class LatticeVector:
    """Integer coordinates of a second-homology class in the vertex basis."""

    coords: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class SpinCOrbit:
    """A translation orbit of characteristic vectors.

    ``representative`` is the lexicographically least box member, ``index``
    its position among the |det| orbits sorted by representative.
    """

    representative: CharVector
    index: int


@dataclass(frozen=True)
class OrbitMembers:
    orbit: SpinCOrbit
    members: tuple[CharVector, ...]


def is_characteristic(k: CharVector | Sequence[int], form: IntersectionForm) -> bool:
    evals = k.evals if isinstance(k, CharVector) else tuple(k)
    return all(
        (evals[i] - form.matrix[i][i]) % 2 == 0 for i in range(len(form))
    )


def pd_dual(x: LatticeVector, form: IntersectionForm) -> CharVector:
    """The functional <x*, -> = (x, -); characteristic only for special x."""
    n = len(form)
    coords = x.coords
    return CharVector(
        tuple(sum(form.matrix[i][j] * coords[j] for j in range(n)) for i in range(n))
    )


def box_ranges(form: IntersectionForm) -> list[range]:
    """Per-vertex evaluation ranges {m, m+2, ..., -m} of the box."""
    return [range(m, -m + 1, 2) for m in (row[i] for i, row in enumerate(form.matrix))]


def box_size(form: IntersectionForm) -> int:
    size = 1
    for i in range(len(form)):
        size *= -form.matrix[i][i] + 1
    return size


def in_box(evals: Sequence[int], form: IntersectionForm) -> bool:
    return all(
        form.matrix[i][i] <= evals[i] <= -form.matrix[i][i]
        for i in range(len(form))
    )


def enumerate_box(
    form: IntersectionForm, box_cap: int = DEFAULT_BOX_CAP
) -> list[CharVector]:
    """All characteristic vectors that can be nonzero in the quotient.

    Exactly the product of the per-vertex ranges; raises BoxTooLarge instead
    of truncating when the product exceeds ``box_cap``.
    """
    if not form.is_negative_definite:
        raise NotNegativeDefinite("box enumeration requires a negative-definite form")
    size = box_size(form)
    if size > box_cap:
        raise BoxTooLarge(f"box holds {size} vectors, cap is {box_cap}")
    return [CharVector(evals) for evals in product(*box_ranges(form))]


class OrbitIndexer:
    """Exact orbit keys for characteristic vectors of a fixed form.

    k and k' share an orbit iff adj(A)(k' - k) vanishes mod 2 det(A), so the
    residue tuple of adj(A) k is a complete orbit invariant over the integers.
    """

    def __init__(self, form: IntersectionForm):
        if not form.is_negative_definite:
            raise NotNegativeDefinite("orbit decomposition requires negative definiteness")
        self.form = form
        self.n = len(form)
        self.adjugate = intlinalg.adjugate(form.matrix)
        self.determinant = form.determinant
        self.modulus = 2 * abs(form.determinant)

    def key(self, k: CharVector | Sequence[int]) -> tuple[int, ...]:
        evals = k.evals if isinstance(k, CharVector) else k
        mod = self.modulus
        return tuple(
            sum(self.adjugate[i][j] * evals[j] for j in range(self.n)) % mod
            for i in range(self.n)
        )

    def lattice_coordinates(
        self, k: CharVector | Sequence[int], k0: CharVector | Sequence[int]
    ) -> LatticeVector:
        """Solve k = k0 + 2 x* for integral x; ValueError if orbits differ."""
        evals = k.evals if isinstance(k, CharVector) else k
        base = k0.evals if isinstance(k0, CharVector) else k0
        diff = [evals[j] - base[j] for j in range(self.n)]
        coords = []
        denom = 2 * self.determinant
        for i in range(self.n):
            num = sum(self.adjugate[i][j] * diff[j] for j in range(self.n))
            q, r = divmod(num, denom)
            if r:
                raise ValueError("vectors lie in different orbits")
            coords.append(q)
        return LatticeVector(tuple(coords))


def orbit_decompose(
    box: Iterable[CharVector], form: IntersectionForm
) -> list[OrbitMembers]:
    """Partition the full box into spin^c orbits; exactly |det| of them."""
    indexer = OrbitIndexer(form)
    groups: dict[tuple[int, ...], list[CharVector]] = {}
    for k in box:
        groups.setdefault(indexer.key(k), []).append(k)
    ordered = sorted(groups.values(), key=lambda ms: min(m.evals for m in ms))
    out = []
    for idx, members in enumerate(ordered):
        members = sorted(members, key=lambda m: m.evals)
        out.append(
            OrbitMembers(
                orbit=SpinCOrbit(representative=members[0], index=idx),
                members=tuple(members),
            )
        )
    expected = abs(form.determinant)
    if len(out) != expected:
        raise InternalInvariantViolation(
            f"box met {len(out)} orbits, |det| = {expected}"
        )
    return out


def chi(x: LatticeVector, canonical: CanonicalClass, form: IntersectionForm) -> int:
    """-(<K, x> + (x, x))/2, the Riemann-Roch style count used for rationality."""
    n = len(form)
    coords = x.coords
    square = sum(
        form.matrix[i][j] * coords[i] * coords[j] for i in range(n) for j in range(n)
    )
    pairing = sum(canonical.evals[i] * coords[i] for i in range(n))
    total = pairing + square
    if total % 2:
        raise InternalInvariantViolation("canonical class failed the parity test")
    return -total // 2


def _double_weight(
    coords: Sequence[int], k0: Sequence[int], form: IntersectionForm
) -> int:
    """(x, x) + <k0, x>; equals -2 w(x) for the form's own pairing."""
    n = len(form)
    square = sum(
        form.matrix[i][j] * coords[i] * coords[j] for i in range(n) for j in range(n)
    )
    return square + sum(k0[i] * coords[i] for i in range(n))


def weight(x: LatticeVector, k0: CharVector, form: IntersectionForm) -> int:
    """w(x) = -((x, x) + <k0, x>)/2 in the +1 edge convention.

    The graded engine is defined with adjacent vertices pairing to +1, so a
    form built with the -1 convention is rejected here rather than silently
    producing the wrong filtration; convert the forest first.
    """
    if form.edge_sign is not EdgeSign.PLUS_ONE:
        raise ValueError("weight requires a +1 convention form; convert the forest first")
    doubled = _double_weight(x.coords, k0.evals, form)
    if doubled % 2:
        raise ParityViolation("k0 is not characteristic for this form")
    return -doubled // 2


def lattice_to_char(
    x: LatticeVector, k0: CharVector, form: IntersectionForm
) -> CharVector:
    """k0 + 2 x*: the orbit's bijection between lattice points and vectors."""
    dual = pd_dual(x, form)
    return CharVector(tuple(k0.evals[i] + 2 * dual.evals[i] for i in range(len(form))))


def char_to_lattice(
    k: CharVector, k0: CharVector, form: IntersectionForm
) -> LatticeVector:
    """Inverse of :func:`lattice_to_char`; ValueError if orbits differ."""
    return OrbitIndexer(form).lattice_coordinates(k, k0)


def is_local_minimum(
    x: LatticeVector, k0: CharVector, form: IntersectionForm
) -> bool:
    """Whether w(x) <= w(x') for all 2n unit neighbors x' of x.

    Compares doubled weights so no halving is needed; works in either edge
    convention (the filtration semantics belong to the +1 one).
    """
    n = len(form)
    base = _double_weight(x.coords, k0.evals, form)
    coords = list(x.coords)
    for i in range(n):
        for step in (1, -1):
            coords[i] += step
            neighbor = _double_weight(coords, k0.evals, form)
            coords[i] -= step
            if neighbor > base:  # w(neighbor) < w(x)
                return False
    return True


def coercivity_bounds(
    form: IntersectionForm, k0: CharVector
) -> tuple[Fraction, Fraction]:
    """Exact rationals (c, C) with w(x) >= c |x|^2 - C for all lattice x.

    Driven by the exact LDL eigenvalue bound on the positive-definite form
    -(x, x); used to certify enumeration windows.
    """
    if not form.is_negative_definite:
        raise NotNegativeDefinite("coercivity needs a negative-definite form")
    n = len(form)
    if n == 0:
        return Fraction(1), Fraction(0)
    negated = [[-x for x in row] for row in form.matrix]
    lam = intlinalg.min_eigenvalue_lower_bound(negated)
    norm_sq = Fraction(sum(v * v for v in k0.evals))
    return lam / 4, norm_sq / (4 * lam)


def weight_radius_sq_bound(
    form: IntersectionForm, k0: CharVector, level: int
) -> Fraction:
    """R with: w(x) <= level implies |x|^2 <= R.  Negative R means no point.

    From lambda |x|^2 <= -(x,x) = 2w(x) + <k0,x> <= 2 level + |k0| |x| and the
    quadratic formula, rounding the square roots outward.
    """
    if not form.is_negative_definite:
        raise NotNegativeDefinite("radius bound needs a negative-definite form")
    n = len(form)
    if n == 0:
        return Fraction(0) if level >= 0 else Fraction(-1)
    negated = [[-x for x in row] for row in form.matrix]
    lam = intlinalg.min_eigenvalue_lower_bound(negated)
    norm_sq = Fraction(sum(v * v for v in k0.evals))
    disc = norm_sq + 8 * level * lam
    if disc < 0:
        return Fraction(-1)
    b_up = intlinalg.sqrt_upper_bound(norm_sq)
    root_up = intlinalg.sqrt_upper_bound(disc)
    t_up = (b_up + root_up) / (2 * lam)
    return t_up * t_up
