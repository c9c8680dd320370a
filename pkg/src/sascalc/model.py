"""Core value types for symbiotic systems.

A system is an 8-tuple: components, behaviors, three internal relation sets
(component-component, behavior-behavior, behavior-component), two boundary
relation sets (input, output), and an environment of peer system names.
All types here are immutable; operators elsewhere build new values.

Relation sets carry their kind so that mixing them up is a construction
error, not a silent bug. The capacity of the component relation set is the
full Cartesian square |C|^2, counting both directions and self-pairs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import DuplicateIdentifier, InvalidIdentifier

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

#: Behavior annotation levels run from reflexive (1) to cognitive (5).
LEVEL_RANGE = range(1, 6)


def is_identifier(name: str) -> bool:
    return bool(_IDENT_RE.match(name))


def check_identifier(name: str, role: str = "identifier") -> str:
    if not is_identifier(name):
        raise InvalidIdentifier(name, role)
    return name


class RelationKind(Enum):
    COMPONENT = "component"
    BEHAVIORAL = "behavioral"
    FUNCTIONAL = "functional"
    INPUT = "input"
    OUTPUT = "output"


Pair = tuple[str, str]


@dataclass(frozen=True)
class RelationSet:
    """A kinded set of directed name pairs. Duplicates collapse silently."""

    kind: RelationKind
    pairs: frozenset[Pair] = frozenset()

    @classmethod
    def of(cls, kind: RelationKind, pairs: Iterable[Pair] = ()) -> "RelationSet":
        return cls(kind, frozenset((str(a), str(b)) for a, b in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def union(self, *others: "RelationSet") -> "RelationSet":
        merged = set(self.pairs)
        for other in others:
            if other.kind is not self.kind:
                raise ValueError(
                    f"cannot union {other.kind.value} relations into {self.kind.value}"
                )
            merged |= other.pairs
        return RelationSet(self.kind, frozenset(merged))


@dataclass(frozen=True)
class Behavior:
    """A named behavior, optionally annotated with an intelligence level
    (1..5) and a taxonomy type tag. Annotations are carried as data;
    range checking happens in :func:`validate` and in the DSL front end.
    """

    name: str
    level: int | None = None
    taxon: str | None = None


@dataclass(frozen=True)
class System:
    """The 8-tuple. Construct through :func:`new_system` for name checking;
    direct construction only verifies that relation sets carry the right kind.

    A system with empty components and behaviors is a legal environment
    stub: it names a peer whose internals are out of scope.
    """

    name: str
    components: frozenset[str] = frozenset()
    behaviors: frozenset[Behavior] = frozenset()
    rc: RelationSet = field(default_factory=lambda: RelationSet(RelationKind.COMPONENT))
    rb: RelationSet = field(default_factory=lambda: RelationSet(RelationKind.BEHAVIORAL))
    rf: RelationSet = field(default_factory=lambda: RelationSet(RelationKind.FUNCTIONAL))
    ri: RelationSet = field(default_factory=lambda: RelationSet(RelationKind.INPUT))
    ro: RelationSet = field(default_factory=lambda: RelationSet(RelationKind.OUTPUT))
    environment: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.name:
            raise InvalidIdentifier(self.name, "system name")
        expected = (
            (self.rc, RelationKind.COMPONENT),
            (self.rb, RelationKind.BEHAVIORAL),
            (self.rf, RelationKind.FUNCTIONAL),
            (self.ri, RelationKind.INPUT),
            (self.ro, RelationKind.OUTPUT),
        )
        for rel, kind in expected:
            if rel.kind is not kind:
                raise ValueError(
                    f"relation slot for {kind.value} holds {rel.kind.value} relations"
                )

    @property
    def behavior_names(self) -> frozenset[str]:
        return frozenset(b.name for b in self.behaviors)

    def behavior(self, name: str) -> Behavior:
        for b in self.behaviors:
            if b.name == name:
                return b
        raise KeyError(name)

    def is_stub(self) -> bool:
        return not self.components and not self.behaviors


def new_system(
    name: str,
    components: Iterable[str] = (),
    behaviors: Iterable[str | Behavior] = (),
    environment: Iterable[str] = (),
) -> System:
    """Build a system with empty relation sets.

    Names must be lexical identifiers. A repeated name inside the component
    list, behavior list, or environment list raises DuplicateIdentifier.
    """

    check_identifier(name, "system name")

    comp: list[str] = []
    for c in components:
        check_identifier(c, "component name")
        if c in comp:
            raise DuplicateIdentifier(c, f"components of {name}")
        comp.append(c)

    beh: list[Behavior] = []
    seen: set[str] = set()
    for b in behaviors:
        if isinstance(b, str):
            b = Behavior(b)
        check_identifier(b.name, "behavior name")
        if b.name in seen:
            raise DuplicateIdentifier(b.name, f"behaviors of {name}")
        seen.add(b.name)
        beh.append(b)

    env: list[str] = []
    for e in environment:
        check_identifier(e, "environment name")
        if e in env:
            raise DuplicateIdentifier(e, f"environment of {name}")
        env.append(e)

    return System(
        name=name,
        components=frozenset(comp),
        behaviors=frozenset(beh),
        environment=frozenset(env),
    )


def potential_relation_count(system: System) -> int:
    """Capacity of the component relation set: the full Cartesian square,
    self-pairs and both directions included."""

    return len(system.components) ** 2


@dataclass(frozen=True)
class Violation:
    """One well-formedness finding. ``path`` locates the offending element."""

    code: str
    path: str
    message: str


def _resolved_environment(
    system: System, context: Mapping[str, System] | None
) -> tuple[frozenset[str], bool]:
    """Behaviors visible through the environment, and whether the view is
    complete. An environment name that cannot be resolved makes the view
    incomplete, which suppresses boundary endpoint checks: the peer may
    well supply the endpoint, we just cannot see it.
    """

    if context is None:
        return frozenset(), not system.environment
    visible: set[str] = set()
    complete = True
    for env_name in system.environment:
        peer = context.get(env_name)
        if peer is None:
            complete = False
        else:
            visible.update(b.name for b in peer.behaviors)
    return frozenset(visible), complete


def validate(system: System, context: Mapping[str, System] | None = None) -> list[Violation]:
    """Well-formedness report for one system.

    Internal relations must stay inside the declared component and behavior
    sets. Boundary relations must touch an own behavior on the inner side;
    the outer side is checked against the environment's behaviors when every
    environment peer is resolvable through ``context`` (an empty environment
    resolves completely and therefore supplies nothing). Behavior levels,
    when present, must lie in 1..5. Returns findings, never raises.
    """

    out: list[Violation] = []
    comp = system.components
    beh = system.behavior_names

    def dangle(slot: str, pair: Pair, what: str) -> None:
        a, b = pair
        out.append(
            Violation(
                "DanglingEndpoint",
                f"{slot}[{a}->{b}]",
                f"{slot} relation ({a} -> {b}): {what}",
            )
        )

    for a, b in system.rc:
        if a not in comp or b not in comp:
            dangle("rc", (a, b), "both endpoints must be own components")
    for a, b in system.rb:
        if a not in beh or b not in beh:
            dangle("rb", (a, b), "both endpoints must be own behaviors")
    for a, b in system.rf:
        if a not in beh or b not in comp:
            dangle("rf", (a, b), "expects behavior -> component")

    visible, complete = _resolved_environment(system, context)
    for ext, own in system.ri:
        if own not in beh:
            dangle("ri", (ext, own), f"{own!r} is not an own behavior")
        elif complete and ext not in visible:
            dangle("ri", (ext, own), f"{ext!r} is not supplied by the environment")
    for own, ext in system.ro:
        if own not in beh:
            dangle("ro", (own, ext), f"{own!r} is not an own behavior")
        elif complete and ext not in visible:
            dangle("ro", (own, ext), f"{ext!r} is not consumed by the environment")

    for b in sorted(system.behaviors, key=lambda b: b.name):
        if b.level is not None and b.level not in LEVEL_RANGE:
            out.append(
                Violation(
                    "LevelOutOfRange",
                    f"behaviors[{b.name}].level",
                    f"behavior {b.name!r} has level {b.level}, expected 1..5",
                )
            )

    return out
