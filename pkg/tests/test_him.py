"""Behavior taxonomy, the 2x2 classifier, and deterministic dispatch."""

import json

import pytest

from sascalc.errors import DuplicateIdentifier, SasError, UnknownEvent, UnknownTaxon
from sascalc.him import (
    CATEGORY_LEVEL,
    LEVEL_COUNTS,
    TAXONOMY,
    BehaviorBinding,
    Category,
    Determinism,
    Dispatcher,
    EventSpec,
    EventType,
    capability_set,
    classify,
    find_taxon,
    parse_events_text,
    taxon_by_tag,
    taxonomy,
)

D = Determinism.DETERMINISTIC
I = Determinism.INDETERMINISTIC


def test_sixteen_taxa_in_level_order():
    taxa = taxonomy()
    assert len(taxa) == 16
    assert [t.level for t in taxa] == sorted(t.level for t in taxa)


def test_level_counts():
    assert LEVEL_COUNTS == (1, 3, 3, 5, 4)
    assert sum(LEVEL_COUNTS) == 16
    for level, count in enumerate(LEVEL_COUNTS, start=1):
        assert sum(1 for t in TAXONOMY if t.level == level) == count


def test_level_two_tags():
    tags = {t.type_tag for t in TAXONOMY if t.level == 2}
    assert tags == {"Event-driven", "Time-driven", "Interrupt-driven"}


def test_symbol_quirks_kept_verbatim():
    assert taxon_by_tag("Goal-driven").symbol == "Ḃ_cog^sd"
    assert taxon_by_tag("Inference-driven").symbol == "Ḃ_aut^id"
    assert taxon_by_tag("Inductive").symbol == "Ḃ_cog^id"
    # The "id" suffix repeats across levels; identity is (level, type_tag).
    suffixes = [t.symbol.rpartition("^")[2] for t in TAXONOMY if "^" in t.symbol]
    assert suffixes.count("id") == 2
    assert len({(t.level, t.type_tag) for t in TAXONOMY}) == 16


def test_categories_map_to_levels():
    assert [CATEGORY_LEVEL[c] for c in Category] == [1, 2, 3, 4, 5]
    for t in TAXONOMY:
        assert CATEGORY_LEVEL[t.category] == t.level


def test_taxon_lookup():
    assert taxon_by_tag("Reflexive").level == 1
    assert find_taxon("Deductive").symbol == "Ḃ_aut^de"
    assert find_taxon("nope") is None
    with pytest.raises(UnknownTaxon):
        taxon_by_tag("nope")


def test_classifier_cells():
    assert classify(D, D) is Category.REFLEXIVE
    assert classify(D, I) is Category.IMPERATIVE
    assert classify(I, D) is Category.ADAPTIVE
    assert classify(I, I) is Category.AUTONOMOUS


def test_capability_chain_is_strictly_increasing():
    sets = [capability_set(c) for c in Category]
    assert [len(s) for s in sets] == [1, 4, 7, 12, 16]
    for lower, upper in zip(sets, sets[1:]):
        assert lower < upper  # proper subset


def test_event_type_values():
    assert [e.value for e in EventType] == [
        "external-stimulus",
        "timer",
        "interrupt",
        "internal",
    ]


# --- dispatcher ------------------------------------------------------------


def _dispatcher() -> Dispatcher:
    d = Dispatcher()
    d.register_event(EventSpec("tick", EventType.TIMER))
    d.register_event(EventSpec("jolt", EventType.INTERRUPT))
    d.register_event(EventSpec("mute", EventType.INTERNAL))
    d.register(BehaviorBinding("tick", "log_time", taxon_by_tag("Time-driven")))
    d.register(BehaviorBinding("tick", "plan", taxon_by_tag("Goal-driven")))
    d.register(BehaviorBinding("jolt", "first", taxon_by_tag("Perceptive")))
    d.register(BehaviorBinding("jolt", "second", taxon_by_tag("Deductive")))
    return d


def test_duplicate_event_registration_refused():
    d = Dispatcher()
    d.register_event(EventSpec("tick", EventType.TIMER))
    with pytest.raises(DuplicateIdentifier):
        d.register_event(EventSpec("tick", EventType.INTERNAL))


def test_binding_requires_registered_event():
    d = Dispatcher()
    with pytest.raises(UnknownEvent):
        d.register(BehaviorBinding("ghost", "b", taxon_by_tag("Reflexive")))


def test_select_prefers_highest_level():
    d = _dispatcher()
    assert d.select("tick").behavior == "plan"  # level 5 beats 2


def test_select_breaks_ties_by_registration_order():
    d = _dispatcher()
    # Perceptive and Deductive both sit at level 4.
    assert d.select("jolt").behavior == "first"


def test_dispatch_trace_shape():
    d = _dispatcher()
    trace = d.dispatch([(0, "tick"), (3, "jolt"), (9, "mute")])
    rows = trace.to_dicts()
    assert [r["seq"] for r in rows] == [0, 1, 2]
    assert [r["t"] for r in rows] == [0, 3, 9]
    assert rows[0]["binding"] == "plan" and rows[0]["level"] == 5
    assert rows[1]["taxon_tag"] == "Perceptive"
    # mute is registered but unbound: explicit unhandled entry.
    assert rows[2]["binding"] is None and trace.entries[2].unhandled()


def test_dispatch_rejects_unregistered_event():
    d = _dispatcher()
    with pytest.raises(UnknownEvent):
        d.dispatch([(0, "ghost")])


def test_dispatch_is_deterministic():
    occurrences = [(i, name) for i, name in enumerate(["tick", "jolt", "tick", "mute"])]
    blobs = set()
    for _ in range(3):
        trace = _dispatcher().dispatch(occurrences)
        blobs.add(json.dumps(trace.to_dicts(), sort_keys=True))
    assert len(blobs) == 1


# --- events file -----------------------------------------------------------


def test_parse_events_text():
    text = "# demo\n\n0,tick\n 5 , jolt # inline\n\n7,tick\n"
    assert parse_events_text(text) == [(0, "tick"), (5, "jolt"), (7, "tick")]


def test_parse_events_text_rejects_malformed_lines():
    with pytest.raises(SasError, match="line 2"):
        parse_events_text("0,tick\nnonsense\n")
    with pytest.raises(SasError, match="not an integer"):
        parse_events_text("x,tick\n")
    with pytest.raises(SasError):
        parse_events_text("3,\n")
