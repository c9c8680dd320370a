"""Concept algebra and knowledge measurement.

The unit of knowledge here is the binary conceptual relation, worth exactly
1 bir. Everything that measures knowledge counts such relations: items
relating two concepts, composition records in layered bases, and the gain
terms produced when concept collections meet. Higher-arity constructs are
decomposed into binary constituents before measuring; an n-ary star around
one concept therefore measures n bir, not the cardinality of an n-fold
object product.

A knowledge base is layered: layer 0 is the concept set, and each composed
layer pairs up the entries of the layer below it (unordered, distinct), so
n flat concepts compose to C(n,2) records, then C(C(n,2),2), and so on.

Memory capacity lives here too: the number of distinct synapse subsets a
neuron population supports is a binomial coefficient far outside float
range, so it is only ever handled as a base-10 logarithm via log-gamma.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, Sequence

from .errors import (
    DanglingConcept,
    DomainError,
    DuplicateIdentifier,
    EmptyBase,
    StageFailure,
    UnknownTag,
)

BIR_PER_ITEM = 1


@dataclass(frozen=True)
class Concept:
    """A formal concept: attributes (intension), objects (extension),
    internal object-attribute relations, and named input/output peers.

    ``inputs`` and ``outputs`` hold the far ends of the boundary relations,
    i.e. peer concept names; the near end is always this concept. Peers need
    not exist in any particular base: unresolvable names mean external peers
    and are checked only where a base provides scope.
    """

    name: str
    attributes: frozenset[str] = frozenset()
    objects: frozenset[str] = frozenset()
    internal: frozenset[tuple[str, str]] = frozenset()
    inputs: frozenset[str] = frozenset()
    outputs: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for obj, attr in self.internal:
            if obj not in self.objects or attr not in self.attributes:
                raise ValueError(
                    f"internal relation ({obj} -> {attr}) of {self.name!r} "
                    "must pair an own object with an own attribute"
                )

    @property
    def internal_capacity(self) -> int:
        """Size of the full object-attribute product |O| * |A|."""

        return len(self.objects) * len(self.attributes)


def concept(
    name: str,
    attributes: Iterable[str] = (),
    objects: Iterable[str] = (),
    internal: Iterable[tuple[str, str]] = (),
    inputs: Iterable[str] = (),
    outputs: Iterable[str] = (),
) -> Concept:
    return Concept(
        name=name,
        attributes=frozenset(attributes),
        objects=frozenset(objects),
        internal=frozenset(internal),
        inputs=frozenset(inputs),
        outputs=frozenset(outputs),
    )


@dataclass(frozen=True)
class KnowledgeItem:
    """An ordered pair of concept names. One item, one bir."""

    source: str
    target: str


@dataclass(frozen=True)
class CompositionRecord:
    """One layer-k entry pairing two layer-(k-1) entry ids."""

    ident: str
    left: str
    right: str


@dataclass(frozen=True)
class KnowledgeBase:
    """Concepts, items over them, and zero or more composed layers.

    Immutable: insertion and composition return new bases, measurement is
    a pure read, so snapshots can be shared across threads freely.
    """

    concepts: tuple[Concept, ...] = ()
    items: tuple[KnowledgeItem, ...] = ()
    layers: tuple[tuple[CompositionRecord, ...], ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for c in self.concepts:
            if c.name in seen:
                raise DuplicateIdentifier(c.name, "knowledge base concepts")
            seen.add(c.name)

    def concept_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.concepts)

    def get(self, name: str) -> Concept:
        for c in self.concepts:
            if c.name == name:
                return c
        raise DanglingConcept(name)

    def has(self, name: str) -> bool:
        return any(c.name == name for c in self.concepts)

    def top_layer_ids(self) -> tuple[str, ...]:
        """Entry ids of the topmost layer; layer 0 is the concept names."""

        if self.layers:
            return tuple(r.ident for r in self.layers[-1])
        return self.concept_names()


def measure_unit(kb: KnowledgeBase, item: KnowledgeItem) -> int:
    """Always 1 bir, once both ends resolve in the owning base."""

    kb.get(item.source)
    kb.get(item.target)
    return BIR_PER_ITEM


@dataclass(frozen=True)
class GainBreakdown:
    intension: int
    extension: int
    internal: int
    input: int
    output: int

    @property
    def total(self) -> int:
        return self.intension + self.extension + self.internal + self.input + self.output

    def as_dict(self) -> dict[str, int]:
        return {
            "intension": self.intension,
            "extension": self.extension,
            "internal": self.internal,
            "input": self.input,
            "output": self.output,
            "total": self.total,
        }


def knowledge_symbiosis_gain(
    cs1: Sequence[Concept], cs2: Sequence[Concept]
) -> GainBreakdown:
    """Gain in bir when two concept collections meet.

    Every cross pair contributes five terms: the products of intension
    sizes, extension sizes, input-set sizes, and output-set sizes, plus
    both concepts' full internal capacities |O|*|A|. The capacity is used
    deliberately: the meeting exposes each side's whole object-attribute
    plane, not just the subset someone bothered to declare.
    """

    intension = extension = internal = inputs = outputs = 0
    for ci in cs1:
        for cj in cs2:
            intension += len(ci.attributes) * len(cj.attributes)
            extension += len(ci.objects) * len(cj.objects)
            internal += ci.internal_capacity + cj.internal_capacity
            inputs += len(ci.inputs) * len(cj.inputs)
            outputs += len(ci.outputs) * len(cj.outputs)
    return GainBreakdown(intension, extension, internal, inputs, outputs)


def itemized_knowledge(
    c0: Concept, others: Sequence[Concept]
) -> tuple[tuple[KnowledgeItem, ...], int]:
    """Relate one concept to each of the others.

    The star decomposes into binary items (c0, c_i), one per distinct
    other, and measures their count in bir. Duplicates among the others
    collapse by name, first occurrence wins.
    """

    seen: set[str] = set()
    items: list[KnowledgeItem] = []
    for c in others:
        if c.name in seen:
            continue
        seen.add(c.name)
        items.append(KnowledgeItem(c0.name, c.name))
    return tuple(items), len(items) * BIR_PER_ITEM


def compose_layer(kb: KnowledgeBase) -> KnowledgeBase:
    """Add one layer pairing up the current top layer's entries.

    Records pair distinct entries, unordered, enumerated over the sorted
    entry ids so composition is deterministic. One step of introspective
    learning; repeat to grow the hierarchy.
    """

    if not kb.concepts:
        raise EmptyBase("cannot compose over a base with no concepts")
    k = len(kb.layers) + 1
    entries = sorted(kb.top_layer_ids())
    records = tuple(
        CompositionRecord(f"k{k}.{i}", left, right)
        for i, (left, right) in enumerate(itertools.combinations(entries, 2))
    )
    return KnowledgeBase(kb.concepts, kb.items, kb.layers + (records,))


def entire_knowledge_measure(kb: KnowledgeBase) -> int:
    """Total bir held by a base: its items plus every composed record."""

    return len(kb.items) * BIR_PER_ITEM + sum(len(layer) for layer in kb.layers)


def acquire(kb: KnowledgeBase, c0: Concept) -> KnowledgeBase:
    """Knowledge acquisition: insert a concept and relate it to the base.

    Realizes composition-with-existing-knowledge as union plus insertion:
    the new concept joins the concept set and one item (c0, c_i) is added
    per existing concept. The entire measure grows by exactly that count.
    """

    if kb.has(c0.name):
        raise DuplicateIdentifier(c0.name, "knowledge base concepts")
    new_items, _ = itemized_knowledge(c0, kb.concepts)
    return KnowledgeBase(kb.concepts + (c0,), kb.items + new_items, kb.layers)


# --- memory capacity ---------------------------------------------------

# Below this synapse count the sum of log ratios is both fast and exact to
# the last bit; above it the three-term log-gamma difference is used, where
# the relative cancellation is mild because k is a large share of n.
_SUM_OF_LOGS_LIMIT = 1 << 16

_LN10 = math.log(10.0)


def _as_count(value: float | int, role: str) -> int:
    if isinstance(value, bool):
        raise DomainError(f"{role} must be a number, got bool")
    if isinstance(value, int):
        n = value
    else:
        f = float(value)
        if math.isnan(f) or math.isinf(f):
            raise DomainError(f"{role} must be finite, got {value!r}")
        n = round(f)
        if abs(f - n) > 0.5:  # unreachable, round contract; kept for clarity
            raise DomainError(f"{role} must be integer-like, got {value!r}")
    if n < 0:
        raise DomainError(f"{role} must be non-negative, got {value!r}")
    return n


def memory_capacity_log10(n_neurons: float | int, n_synapses: float | int) -> float:
    """log10 of the binomial coefficient C(n_neurons, n_synapses).

    Magnitudes may arrive as floats like 1e11; they are rounded to exact
    integers first. The coefficient itself is never formed: for small k
    (after the symmetry reduction k = min(k, n-k)) the result is an fsum
    of log10 ratios, otherwise a log-gamma difference. Raises DomainError
    when k exceeds n.
    """

    n = _as_count(n_neurons, "n_neurons")
    k = _as_count(n_synapses, "n_synapses")
    if k > n:
        raise DomainError(f"n_synapses ({k}) exceeds n_neurons ({n})")
    k = min(k, n - k)
    if k == 0:
        return 0.0
    if k <= _SUM_OF_LOGS_LIMIT:
        terms: list[float] = []
        for i in range(k):
            terms.append(math.log10(n - i))
            terms.append(-math.log10(i + 1))
        return math.fsum(terms)
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    ) / _LN10


# --- cognition pipeline -------------------------------------------------


class StageKind(Enum):
    DATA = "Data"
    INFORMATION = "Information"
    KNOWLEDGE = "Knowledge"
    INTELLIGENCE = "Intelligence"


PIPELINE_ORDER: tuple[StageKind, ...] = (
    StageKind.DATA,
    StageKind.INFORMATION,
    StageKind.KNOWLEDGE,
    StageKind.INTELLIGENCE,
)


@dataclass(frozen=True)
class CognitionStage:
    kind: StageKind
    transform: Callable[[Any], Any]
    note: str = ""


def cognition_pipeline(stages: Sequence[CognitionStage], data: Any) -> Any:
    """Apply the four stages in their fixed order, no skipping.

    The stage list must supply exactly Data, Information, Knowledge and
    Intelligence, in that order; anything else is a ValueError. A stage
    whose transform raises is reported as StageFailure with its 1-based
    position, chaining the original exception.
    """

    kinds = tuple(s.kind for s in stages)
    if kinds != PIPELINE_ORDER:
        want = " -> ".join(k.value for k in PIPELINE_ORDER)
        raise ValueError(f"stages must be exactly {want}")
    value = data
    for index, stage in enumerate(stages, start=1):
        try:
            value = stage.transform(value)
        except Exception as exc:
            raise StageFailure(index, stage.kind.value, exc) from exc
    return value


# --- learning taxonomy --------------------------------------------------


@dataclass(frozen=True)
class LearningCategory:
    tag: str
    symbol: str
    signature: str
    executable: bool


_LEARNING: dict[str, LearningCategory] = {
    lc.tag: lc
    for lc in (
        LearningCategory("ObjectIdentification", "L_i", "x = P · x", False),
        LearningCategory("ClusterClassification", "L_c", "X ⊂ P", False),
        LearningCategory("PatternRecognition", "L_r", "X = P", False),
        LearningCategory("FunctionalRegression", "L_f", "X ⇒ P(X)", False),
        LearningCategory("BehaviorGeneration", "L_b", "X ⇒ b(P(X))", False),
        LearningCategory("KnowledgeAcquisition", "L_k", "X ⇒ c(X) ⊎ K", True),
    )
}


def learning_category(tag: str) -> LearningCategory:
    """Descriptor for one of the six learning categories.

    Only KnowledgeAcquisition is executable in this package; it is realized
    by :func:`acquire` (union plus insertion) and :func:`compose_layer`.
    The other five are taxonomy descriptors, nothing more.
    """

    try:
        return _LEARNING[tag]
    except KeyError:
        raise UnknownTag(tag) from None


LEARNING_TAGS: tuple[str, ...] = tuple(_LEARNING)
