"""Exception hierarchy shared by the calculus modules.

Every domain error raised by this package derives from :class:`SasError`,
so callers (and the HTTP service) can catch one type and map it to a
client-side failure. Exceptions carry structured attributes where a caller
is likely to branch on them.
"""

from __future__ import annotations


class SasError(Exception):
    """Base class for all domain errors raised by sascalc."""


class InvalidIdentifier(SasError):
    """A name does not match the identifier lexicon (letter or underscore,
    then letters, digits, underscores)."""

    def __init__(self, name: str, role: str = "identifier") -> None:
        self.name = name
        self.role = role
        super().__init__(f"invalid {role}: {name!r}")


class DuplicateIdentifier(SasError):
    """The same name was supplied twice where uniqueness is required."""

    def __init__(self, name: str, where: str) -> None:
        self.name = name
        self.where = where
        super().__init__(f"duplicate name {name!r} in {where}")


class OverlappingComponents(SasError):
    """Fusion operands share component names; fusion requires disjoint sets."""

    def __init__(self, overlap: frozenset[str]) -> None:
        self.overlap = overlap
        names = ", ".join(sorted(overlap))
        super().__init__(f"component sets overlap: {names}")


class OverlappingBehaviors(SasError):
    """Fusion operands share behavior names."""

    def __init__(self, overlap: frozenset[str]) -> None:
        self.overlap = overlap
        names = ", ".join(sorted(overlap))
        super().__init__(f"behavior sets overlap: {names}")


class EmptyParts(SasError):
    """An aggregation operator was applied to an empty collection."""


class InvalidRate(SasError):
    """An error rate lies outside the open interval (0, 1)."""

    def __init__(self, value: float, index: int) -> None:
        self.value = value
        self.index = index
        super().__init__(f"rate at index {index} must lie in (0, 1), got {value!r}")


class UnknownEvent(SasError):
    """A binding refers to an event name that was never registered."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unknown event: {name!r}")


class UnknownTaxon(SasError):
    """A taxon tag is not one of the sixteen defined type tags."""

    def __init__(self, tag: str) -> None:
        self.tag = tag
        super().__init__(f"unknown taxon tag: {tag!r}")


class DanglingConcept(SasError):
    """A knowledge item or operation refers to a concept absent from the base."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"concept not in base: {name!r}")


class EmptyBase(SasError):
    """Layer composition was requested on a base with no concepts."""


class DomainError(SasError):
    """Numeric arguments lie outside the mathematical domain of an operation."""


class UnknownTag(SasError):
    """A learning-category tag is not one of the six defined tags."""

    def __init__(self, tag: str) -> None:
        self.tag = tag
        super().__init__(f"unknown learning category tag: {tag!r}")


class StageFailure(SasError):
    """A cognition pipeline stage raised; identifies the failing stage.

    ``stage_index`` is 1-based over the fixed four-stage order.
    """

    def __init__(self, stage_index: int, stage_name: str, cause: BaseException) -> None:
        self.stage_index = stage_index
        self.stage_name = stage_name
        super().__init__(f"stage {stage_index} ({stage_name}) failed: {cause}")


class NonFiniteState(SasError):
    """Numeric integration produced NaN or infinity.

    ``last_valid_index`` is the sample index of the last finite state.
    """

    def __init__(self, last_valid_index: int) -> None:
        self.last_valid_index = last_valid_index
        super().__init__(
            f"state became non-finite; last valid sample index {last_valid_index}"
        )
