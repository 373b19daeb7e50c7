"""Error taxonomy shared by the model, engine, checks, and DSL validator.

Every class name is part of the public contract; DSL-reported instances carry
a source span (line, column) so diagnostics always have a location.
"""

from __future__ import annotations

__all__ = [
    "HpdcalcError",
    "NonModerate",
    "LeftRightMismatch",
    "ImplausibleProfile",
    "AmbientMismatch",
    "UnresolvedIntersection",
    "MissingDisjointness",
    "Underdetermined",
    "UnresolvedBaseLocus",
    "JoinNotModerate",
    "ConflictingDeclarations",
    "ConflictingIntersection",
    "UnknownSymbol",
    "UnknownCategory",
    "DuplicateDeclaration",
]

Span = tuple[int, int]


class HpdcalcError(Exception):
    """Base failure type; `span` is (line, column) when raised from source text."""

    def __init__(self, message: str, span: Span | None = None) -> None:
        super().__init__(message)
        self.span = span

    def __str__(self) -> str:
        base = super().__str__()
        if self.span is not None:
            line, column = self.span
            return f"{line}:{column}: {base}"
        return base


class NonModerate(HpdcalcError):
    """Length >= ambient rank; forbidden for duality-consuming operations."""


class LeftRightMismatch(HpdcalcError):
    """Left and right primitive data disagree on the weighted total."""


class ImplausibleProfile(HpdcalcError):
    """A primitive invariant screens negative at the all-ones assignment."""


class AmbientMismatch(HpdcalcError):
    """Operands live over projective spaces of different ranks."""


class UnresolvedIntersection(HpdcalcError):
    """No declared fiber-product invariant for the pair over the given base."""


class MissingDisjointness(HpdcalcError):
    """The operation needs a declared disjointness group covering its inputs."""


class Underdetermined(HpdcalcError):
    """A required invariant is not derivable from the declarations at hand."""


class UnresolvedBaseLocus(HpdcalcError):
    """No invariant available for the base-locus category."""


class JoinNotModerate(HpdcalcError):
    """A derived join would violate the moderateness bound."""


class ConflictingDeclarations(HpdcalcError):
    """Two applicable sources derive different values for the same invariant."""


class ConflictingIntersection(HpdcalcError):
    """A pair is declared disjoint yet carries a nonzero constant intersection."""


class UnknownSymbol(HpdcalcError):
    """A polynomial mentions a symbol that was never declared."""


class UnknownCategory(HpdcalcError):
    """A statement references a category name that was never declared."""


class DuplicateDeclaration(HpdcalcError):
    """The same name or pair is declared twice."""


class DslSyntaxError(HpdcalcError):
    """Source text does not match the declaration grammar."""
