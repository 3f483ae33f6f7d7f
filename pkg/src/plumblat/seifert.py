"""Seifert invariants over S^2 and their star-shaped plumbings.

Input data is an integer e0 together with coprime pairs (alpha_i, beta_i).
The convention, fixed here once and documented in the README, is:

* each beta_i is reduced mod alpha_i into [0, alpha_i) -- pairs with
  alpha_i = 1 vanish entirely -- and e0 itself is the central framing of the
  star, left untouched by the reduction;
* each leg expands alpha_i / beta_i' as the unique negative continued
  fraction [a_1, ..., a_k] with all a_j >= 2, giving framings -a_1, ...,
  -a_k outward from the center;
* the rational Euler number is e = e0 + sum beta_i'/alpha_i, and the first
  homology of the boundary has order |alpha_1 ... alpha_n * e|, which is
  cross-checked exactly against the determinant of the star.

When the star is not negative definite the orientation is reversed (negate
the Euler number; on normalized data: e0 -> -e0 - #legs, beta' -> alpha -
beta') and the conversion is flagged.  Base orbifold RP^2 has no plumbing
pipeline here and is rejected up front: those fillings are not expressible
as a star over S^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    InternalInvariantViolation,
    InvalidFraction,
    NotNegativeDefiniteEitherOrientation,
    SeifertInputError,
)
from .plumbing import EdgeSign, PlumbingForest, intersection_form, validate_forest


@dataclass(frozen=True)
class SeifertData:
    e0: int
    legs: tuple[tuple[int, int], ...]

    def validate(self) -> None:
        for alpha, beta in self.legs:
            if alpha < 1:
                raise SeifertInputError(f"leg ({alpha},{beta}): alpha must be >= 1")
            if gcd(alpha, abs(beta)) != 1:
                raise SeifertInputError(f"leg ({alpha},{beta}) is not coprime")


def parse_sfs(text: str) -> SeifertData:
    """Parse the CLI form ``"e0; a1/b1 a2/b2 ..."``."""
    head, _, tail = text.partition(";")
    try:
        e0 = int(head.strip())
    except ValueError:
        raise SeifertInputError(f"bad central framing {head.strip()!r}") from None
    legs = []
    for token in tail.split():
        num, slash, den = token.partition("/")
        if not slash:
            raise SeifertInputError(f"leg {token!r} is not of the form a/b")
        try:
            alpha, beta = int(num), int(den)
        except ValueError:
            raise SeifertInputError(f"leg {token!r} is not a pair of integers") from None
        legs.append((alpha, beta))
    data = SeifertData(e0=e0, legs=tuple(legs))
    data.validate()
    return data


def cont_frac_expand(alpha: int, beta: int) -> list[int]:
    """Negative continued fraction of alpha/beta: all terms >= 2.

    Requires 0 < beta < alpha and coprimality; the expansion satisfies
    alpha/beta = a_1 - 1/(a_2 - 1/(...)) and is unique.
    """
    if not (0 < beta < alpha):
        raise InvalidFraction(f"need 0 < beta < alpha, got {alpha}/{beta}")
    if gcd(alpha, beta) != 1:
        raise InvalidFraction(f"{alpha}/{beta} is not reduced")
    terms = []
    num, den = alpha, beta
    while den:
        a = -(-num // den)  # ceiling
        terms.append(a)
        num, den = den, a * den - num
    if any(a < 2 for a in terms):
        raise InternalInvariantViolation("continued fraction produced a term < 2")
    return terms


def evaluate_cont_frac(terms: list[int]) -> Fraction:
    """Value of [a_1, ..., a_k] = a_1 - 1/(a_2 - ...)."""
    value = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        value = a - 1 / value
    return value


def normalize(data: SeifertData) -> SeifertData:
    """Reduce every beta mod alpha into [0, alpha); drop trivial legs."""
    data.validate()
    legs = []
    for alpha, beta in data.legs:
        reduced = beta % alpha
        if reduced:
            legs.append((alpha, reduced))
    return SeifertData(e0=data.e0, legs=tuple(legs))


def reverse_orientation(normalized: SeifertData) -> SeifertData:
    legs = tuple((alpha, alpha - beta) for alpha, beta in normalized.legs)
    return SeifertData(e0=-normalized.e0 - len(legs), legs=legs)


def euler_number(normalized: SeifertData) -> Fraction:
    return normalized.e0 + sum(
        Fraction(beta, alpha) for alpha, beta in normalized.legs
    )


def _build_star(normalized: SeifertData, edge_sign: EdgeSign) -> PlumbingForest:
    vertices = [("c", normalized.e0)]
    edges = []
    for j, (alpha, beta) in enumerate(normalized.legs, start=1):
        previous = "c"
        for t, a in enumerate(cont_frac_expand(alpha, beta), start=1):
            vid = f"{j}.{t}"
            vertices.append((vid, -a))
            edges.append((previous, vid))
            previous = vid
    return validate_forest(vertices, edges, edge_sign)


@dataclass(frozen=True)
class SeifertConversion:
    forest: PlumbingForest
    given: SeifertData
    used: SeifertData  # normalized data of the orientation actually built
    reversed_orientation: bool
    euler: Fraction
    h1_order: int


def seifert_to_plumbing(
    data: SeifertData, *, edge_sign: EdgeSign = EdgeSign.MINUS_ONE
) -> SeifertConversion:
    """Star-shaped negative-definite plumbing of the Seifert data.

    Tries the orientation as given first, then the reverse; raises when
    neither bounds a negative-definite star (e.g. Euler number zero).  The
    order |H_1| from the Seifert data formula is checked exactly against the
    determinant.
    """
    normalized = normalize(data)
    for reversed_flag, candidate in (
        (False, normalized),
        (True, reverse_orientation(normalized)),
    ):
        forest = _build_star(candidate, edge_sign)
        form = intersection_form(forest)
        if not form.is_negative_definite:
            continue
        euler = euler_number(candidate)
        order = euler
        for alpha, _ in candidate.legs:
            order *= alpha
        if order.denominator != 1:
            raise InternalInvariantViolation(
                "alpha-product times Euler number is not an integer"
            )
        h1 = abs(int(order))
        if h1 != abs(form.determinant):
            raise InternalInvariantViolation(
                f"det {form.determinant} disagrees with Seifert |H1| {h1}"
            )
        return SeifertConversion(
            forest=forest,
            given=data,
            used=candidate,
            reversed_orientation=reversed_flag,
            euler=euler,
            h1_order=h1,
        )
    raise NotNegativeDefiniteEitherOrientation(
        "neither orientation of the Seifert data bounds a negative-definite star"
    )
