"""Exception hierarchy and process exit codes.

Every error raised by the library derives from :class:`PlumblatError`.  The
CLI maps error families onto stable exit codes:

* 1 -- command line usage errors,
* 2 -- input parsing / validation / precondition failures,
* 3 -- an enumeration budget was exceeded,
* 4 -- an internal invariant was violated (always a bug).
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_INPUT = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


class PlumblatError(Exception):
    """Base class for all library errors."""

    exit_code = EXIT_INVALID_INPUT


# --- forest validation -------------------------------------------------

class ForestValidationError(PlumblatError):
    """Structural problem with the vertex/edge description of a forest."""


class DuplicateVertexId(ForestValidationError):
    pass


class SelfLoop(ForestValidationError):
    pass


class DanglingEdge(ForestValidationError):
    pass


class DuplicateEdge(ForestValidationError):
    pass


class CycleDetected(ForestValidationError):
    pass


# --- parsing -----------------------------------------------------------

class DslSyntaxError(PlumblatError):
    """A line of the plumbing DSL could not be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidFraction(PlumblatError):
    """Continued fraction input out of range or not coprime."""


class SeifertInputError(PlumblatError):
    """Malformed Seifert invariant string."""


# --- precondition failures ----------------------------------------------

class NotNegativeDefinite(PlumblatError):
    """The operation requires a negative-definite intersection form."""


class NotApplicable(PlumblatError):
    """Precondition of the operation is not met (e.g. bad vertices present)."""


class NotBlowdownable(PlumblatError):
    """The chosen vertex is not a (-1)-framed leaf or isolated vertex."""


class InvalidTriple(PlumblatError):
    """A surgery triple whose framing-bumped graph is not negative definite."""


class ParityViolation(PlumblatError):
    """A vector that was supposed to be characteristic is not."""


class NotNegativeDefiniteEitherOrientation(PlumblatError):
    """Neither orientation of the Seifert data bounds a negative-definite star."""


# --- budgets -------------------------------------------------------------

class BudgetExceeded(PlumblatError):
    exit_code = EXIT_BUDGET


class BoxTooLarge(BudgetExceeded):
    """The product of framing ranges exceeds the configured cap."""


class EnumerationBudgetExceeded(BudgetExceeded):
    """A lattice-point sweep exceeded the configured point cap."""


# --- internal ------------------------------------------------------------

class InternalInvariantViolation(PlumblatError):
    """A certified invariant failed; indicates a bug, never bad input."""

    exit_code = EXIT_INTERNAL


class NegativeOddDimension(InternalInvariantViolation):
    """total dimension fell below |det|, violating the per-orbit lower bound."""
