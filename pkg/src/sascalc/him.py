"""Behavior taxonomy and event dispatch.

The taxonomy is a fixed ladder of 16 behavior types on five levels, with
1, 3, 3, 5 and 4 types per level. A level's capability set contains every
type at or below it, so the five sets form a strict inclusion chain
1 < 4 < 7 < 12 < 16. Levels 1 and 2 pair deterministic behaviors with
stimuli; levels 3 and up admit indeterminism on one or both sides, which is
what the 2x2 classifier below captures.

Dispatch is intentionally boring: indeterministic behavior types are tags
on bindings, not actual nondeterminism, so a trace depends only on the
registered bindings and the event sequence. Selection picks the
highest-level binding for the event; ties go to the earliest registration.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import DuplicateIdentifier, SasError, UnknownEvent, UnknownTaxon


class Category(Enum):
    REFLEXIVE = "Reflexive"
    IMPERATIVE = "Imperative"
    ADAPTIVE = "Adaptive"
    AUTONOMOUS = "Autonomous"
    COGNITIVE = "Cognitive"


CATEGORY_LEVEL: dict[Category, int] = {
    Category.REFLEXIVE: 1,
    Category.IMPERATIVE: 2,
    Category.ADAPTIVE: 3,
    Category.AUTONOMOUS: 4,
    Category.COGNITIVE: 5,
}


class Determinism(Enum):
    DETERMINISTIC = "deterministic"
    INDETERMINISTIC = "indeterministic"


class EventType(Enum):
    EXTERNAL_STIMULUS = "external-stimulus"
    TIMER = "timer"
    INTERRUPT = "interrupt"
    INTERNAL = "internal"


@dataclass(frozen=True)
class HimTaxon:
    level: int
    category: Category
    type_tag: str
    symbol: str
    description: str


def _t(level: int, cat: Category, tag: str, symbol: str, desc: str) -> HimTaxon:
    return HimTaxon(level, cat, tag, symbol, desc)


# Symbols are display strings kept verbatim, quirks included: the
# Goal-driven suffix is "sd", and the "id" suffix appears at both level 4
# and level 5. Identity is only ever keyed on (level, type_tag).
TAXONOMY: tuple[HimTaxon, ...] = (
    _t(1, Category.REFLEXIVE, "Reflexive", "Ḃ_ref",
       "Hard-wired response coupled directly to its stimulus."),
    _t(2, Category.IMPERATIVE, "Event-driven", "Ḃ_imp^e",
       "Predefined routine started by an external event."),
    _t(2, Category.IMPERATIVE, "Time-driven", "Ḃ_imp^t",
       "Predefined routine started at a scheduled point in time."),
    _t(2, Category.IMPERATIVE, "Interrupt-driven", "Ḃ_imp^int",
       "Predefined routine started by a system interrupt."),
    _t(3, Category.ADAPTIVE, "Analogy-based", "Ḃ_adp^ab",
       "Adapts a known solution to a similar request."),
    _t(3, Category.ADAPTIVE, "Feedback-modulated", "Ḃ_adp^fm",
       "Adjusts its course using feedback from recent output."),
    _t(3, Category.ADAPTIVE, "Environment-aware", "Ḃ_adp^ea",
       "Switches among prototype behaviors as surroundings change."),
    _t(4, Category.AUTONOMOUS, "Perceptive", "Ḃ_aut^pe",
       "Acts on what perceptual inference selects."),
    _t(4, Category.AUTONOMOUS, "Problem-driven", "Ḃ_aut^pd",
       "Searches out a workable solution to a stated problem."),
    _t(4, Category.AUTONOMOUS, "Inference-driven", "Ḃ_aut^id",
       "Chains inferences to reach a given goal."),
    _t(4, Category.AUTONOMOUS, "Decision-driven", "Ḃ_aut^dd",
       "Commits to the outcome of a decision procedure."),
    _t(4, Category.AUTONOMOUS, "Deductive", "Ḃ_aut^de",
       "Applies established principles to conclude what to do."),
    _t(5, Category.COGNITIVE, "Knowledge-based", "Ḃ_cog^kb",
       "Draws on an internal knowledge base to shape action."),
    _t(5, Category.COGNITIVE, "Learning-driven", "Ḃ_cog^ld",
       "Combines what it already holds with what it newly acquires."),
    _t(5, Category.COGNITIVE, "Goal-driven", "Ḃ_cog^sd",
       "Works backward from an objective to steps that satisfy it."),
    _t(5, Category.COGNITIVE, "Inductive", "Ḃ_cog^id",
       "Generalizes a rule from repeated observations."),
)

LEVEL_COUNTS: tuple[int, ...] = (1, 3, 3, 5, 4)

_BY_TAG: dict[str, HimTaxon] = {t.type_tag: t for t in TAXONOMY}


def taxonomy() -> list[HimTaxon]:
    """The fixed 16-entry taxonomy, level order."""

    return list(TAXONOMY)


def taxon_by_tag(tag: str) -> HimTaxon:
    try:
        return _BY_TAG[tag]
    except KeyError:
        raise UnknownTaxon(tag) from None


def find_taxon(tag: str) -> HimTaxon | None:
    return _BY_TAG.get(tag)


def classify(stimulus: Determinism, behavior: Determinism) -> Category:
    """2x2 classifier over stimulus and behavior determinism."""

    det = Determinism.DETERMINISTIC
    if stimulus is det and behavior is det:
        return Category.REFLEXIVE
    if stimulus is det:
        return Category.IMPERATIVE
    if behavior is det:
        return Category.ADAPTIVE
    return Category.AUTONOMOUS


def capability_set(category: Category) -> frozenset[HimTaxon]:
    """Every taxon at or below the category's level."""

    top = CATEGORY_LEVEL[category]
    return frozenset(t for t in TAXONOMY if t.level <= top)


@dataclass(frozen=True)
class EventSpec:
    name: str
    event_type: EventType
    payload_note: str | None = None


@dataclass(frozen=True)
class BehaviorBinding:
    """Binds one event to one behavior under one taxon.

    ``process_model`` names an opaque procedure; it is recorded in traces
    and never interpreted.
    """

    event: str
    behavior: str
    taxon: HimTaxon
    process_model: str | None = None


@dataclass(frozen=True)
class TraceEntry:
    seq: int
    t: int
    event: str
    binding: str | None
    level: int | None
    taxon_tag: str | None

    def unhandled(self) -> bool:
        return self.binding is None


@dataclass(frozen=True)
class DispatchTrace:
    entries: tuple[TraceEntry, ...]

    def to_dicts(self) -> list[dict]:
        return [
            {
                "seq": e.seq,
                "t": e.t,
                "event": e.event,
                "binding": e.binding,
                "level": e.level,
                "taxon_tag": e.taxon_tag,
            }
            for e in self.entries
        ]


def parse_events_text(text: str) -> list[tuple[int, str]]:
    """Occurrences from an events file: one `seq,event_name` per line.

    Blank lines and `#` comments are skipped. Raises SasError naming the
    offending line on malformed input.
    """

    out: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        seq_text, sep, name = line.partition(",")
        seq_text = seq_text.strip()
        name = name.strip()
        if not sep or not name:
            raise SasError(f"events line {lineno}: expected 'seq,event_name'")
        try:
            seq = int(seq_text)
        except ValueError:
            raise SasError(
                f"events line {lineno}: sequence {seq_text!r} is not an integer"
            ) from None
        out.append((seq, name))
    return out


class Dispatcher:
    """Event registry plus binding table with deterministic selection."""

    def __init__(self) -> None:
        self._events: dict[str, EventSpec] = {}
        self._bindings: list[BehaviorBinding] = []

    @property
    def events(self) -> dict[str, EventSpec]:
        return dict(self._events)

    @property
    def bindings(self) -> tuple[BehaviorBinding, ...]:
        return tuple(self._bindings)

    def register_event(self, spec: EventSpec) -> None:
        if spec.name in self._events:
            raise DuplicateIdentifier(spec.name, "dispatcher events")
        self._events[spec.name] = spec

    def register(self, binding: BehaviorBinding) -> None:
        if binding.event not in self._events:
            raise UnknownEvent(binding.event)
        self._bindings.append(binding)

    def select(self, event_name: str) -> BehaviorBinding | None:
        """Highest taxon level wins; ties go to earliest registration."""

        best: BehaviorBinding | None = None
        for b in self._bindings:
            if b.event != event_name:
                continue
            if best is None or b.taxon.level > best.taxon.level:
                best = b
        return best

    def dispatch(self, occurrences: Iterable[tuple[int, str]]) -> DispatchTrace:
        """Run an occurrence sequence of (timestamp-index, event name) pairs.

        Every occurrence yields exactly one entry. An event with no binding
        turns into an explicit unhandled entry rather than being dropped.
        An occurrence naming an unregistered event raises UnknownEvent.
        """

        entries: list[TraceEntry] = []
        for seq, (t, name) in enumerate(occurrences):
            if name not in self._events:
                raise UnknownEvent(name)
            chosen = self.select(name)
            if chosen is None:
                entries.append(TraceEntry(seq, t, name, None, None, None))
            else:
                entries.append(
                    TraceEntry(
                        seq,
                        t,
                        name,
                        chosen.behavior,
                        chosen.taxon.level,
                        chosen.taxon.type_tag,
                    )
                )
        return DispatchTrace(tuple(entries))
