"""Exception taxonomy for link projection processing.

Errors are grouped by who is at fault: the input (parse and validation
errors), the mathematical preconditions (rule violations, non-arborescent
inputs), or the library itself (internal consistency checks that should
never fire on correct code).
"""

from __future__ import annotations


class LinkProjError(Exception):
    """Base class for all errors raised by this package."""


# ============================================================
# Input and parse errors
# ============================================================

class MalformedInput(LinkProjError):
    """Raised when input text cannot be parsed.

    Attributes:
        position: Optional character or token index where parsing failed.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class TreeParseError(MalformedInput):
    """Raised when a weighted planar tree literal cannot be parsed."""


class NonPlanar(LinkProjError):
    """Raised when crossing data does not describe a map on the sphere.

    The Euler count of a connected 4-valent map on the sphere must come
    out to crossings + 2 faces; any other count means the rotation data
    encodes a surface of higher genus.
    """


class Disconnected(LinkProjError):
    """Raised when the projection has more than one connected component."""


class CrossingFree(LinkProjError):
    """Raised when an operation requires at least one crossing."""


# ============================================================
# Mathematical precondition errors
# ============================================================

class NotDisjoint(LinkProjError):
    """Raised when circles that must be disjoint cannot be realized so."""


class Unclassifiable(LinkProjError):
    """Raised when a circle fits no position class of the decomposition."""


class NotConway(LinkProjError):
    """Raised when no Conway family exists or a family breaks family rules."""


class RuleViolation(LinkProjError):
    """Base class for weight rule violations on band diagrams and trees."""


class Rule3Violation(RuleViolation):
    """Raised when one twist region mixes positive and negative crossings."""


class NotArborescent(LinkProjError):
    """Raised when a projection contains a jewel, so no tree code exists."""


class NotAlternating(LinkProjError):
    """Raised when a crossing-number bound needs an alternating tree."""


class FreeEdges(LinkProjError):
    """Raised when an operation needs a closed tree but free edges remain."""


class InvalidWeights(LinkProjError):
    """Raised when tree weights violate the degree-dependent weight rules."""


class InvalidMove(LinkProjError):
    """Raised when a flype is requested at a position that admits none."""


class BudgetExceeded(LinkProjError):
    """Raised when an enumeration exceeds its configured budget."""


# ============================================================
# Internal errors
# ============================================================

class InternalInconsistency(LinkProjError):
    """Raised when two independent computations of one fact disagree.

    This always indicates a bug in the library, never bad input. Dual
    route checks (alternation via faces vs strands, family realization
    vs pairwise disjointness) raise this instead of silently picking one
    answer.
    """
