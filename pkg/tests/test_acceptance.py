"""The nine gate checks, one verdict line each.

Each check prints `acceptance N [label]: PASS|FAIL` through the capture
barrier, so a plain `pytest tests/test_acceptance.py` run shows the whole
scoreboard regardless of capture mode. The checks pin the calculus against
independent oracles: brute enumeration for the closed-form gains, exact
rational arithmetic for reliability, big-integer binomials for capacity,
and grid refinement for the integrator.
"""

import itertools
import json
import math
import random
import shutil
import subprocess
import sys
from collections import Counter
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from sascalc import dsl, dynamics, fusion, him, knowledge, model, reliability, topology

CORPUS = Path(__file__).parent / "corpus"


@contextmanager
def verdict(capsys, number: int, label: str):
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            print(
                f"acceptance {number} [{label}]: {'PASS' if ok else 'FAIL'}",
                flush=True,
            )


def _pair(n1: int, n2: int):
    s1 = model.new_system("S1", [f"a{i}" for i in range(n1)])
    s2 = model.new_system("S2", [f"b{i}" for i in range(n2)])
    return s1, s2


def test_criterion_1_fusion_gain(capsys):
    with verdict(capsys, 1, "symbiotic fusion gain"):
        canonical = fusion.fuse(*_pair(3, 2))
        assert canonical.gain == 12

        for n1 in range(11):
            for n2 in range(11):
                s1, s2 = _pair(n1, n2)
                result = fusion.fuse(s1, s2)
                closed = fusion.symbiotic_gain(n1, n2)
                enumerated = fusion.gain_oracle(s1, s2)
                assert closed == enumerated == result.gain == len(result.delta.pairs)


def test_criterion_2_reliability_cancellation(capsys):
    with verdict(capsys, 2, "reliability cancellation"):
        rng = random.Random(20260819)
        for _ in range(1000):
            rates = [rng.uniform(0.01, 0.99) for _ in range(rng.randint(2, 8))]
            profile = reliability.ErrorProfile.of(rates)
            delta = reliability.cancellation_delta(profile)
            assert delta > 0.0
            exact = sum(map(Fraction, rates)) - math.prod(map(Fraction, rates))
            assert abs(delta - float(exact)) <= 1e-12

        lone = reliability.ErrorProfile.of([rng.uniform(0.01, 0.99)])
        assert reliability.cancellation_delta(lone) == 0.0


def test_criterion_3_memory_capacity(capsys):
    with verdict(capsys, 3, "memory capacity log10"):
        # Reference value frozen from an exact big-integer evaluation of
        # log10(C(10^11, 10^3)).
        target = 8432.395353608566
        headline = knowledge.memory_capacity_log10(1e11, 1e3)
        assert abs(headline - target) / target <= 1e-6

        for n in range(61):
            for k in range(n + 1):
                got = knowledge.memory_capacity_log10(n, k)
                want = math.log10(math.comb(n, k))
                assert abs(got - want) <= 1e-9


def _random_concept(rng: random.Random, prefix: str) -> knowledge.Concept:
    attrs = [f"{prefix}a{i}" for i in range(rng.randint(0, 5))]
    objs = [f"{prefix}o{i}" for i in range(rng.randint(0, 5))]
    plane = [(o, a) for o in objs for a in attrs]
    rng.shuffle(plane)
    internal = plane[: rng.randint(0, len(plane))]
    inputs = [f"{prefix}i{i}" for i in range(rng.randint(0, 5))]
    outputs = [f"{prefix}u{i}" for i in range(rng.randint(0, 5))]
    return knowledge.concept(prefix, attrs, objs, internal, inputs, outputs)


def _count_terms(c1: knowledge.Concept, c2: knowledge.Concept) -> int:
    """Count gain terms one by one, never multiplying set sizes."""

    count = 0
    for _ in itertools.product(c1.attributes, c2.attributes):
        count += 1
    for _ in itertools.product(c1.objects, c2.objects):
        count += 1
    for c in (c1, c2):
        for _ in itertools.product(c.objects, c.attributes):
            count += 1
    for _ in itertools.product(c1.inputs, c2.inputs):
        count += 1
    for _ in itertools.product(c1.outputs, c2.outputs):
        count += 1
    return count


def test_criterion_4_knowledge_gain(capsys):
    with verdict(capsys, 4, "knowledge symbiosis gain"):
        rng = random.Random(404)
        for _ in range(500):
            c1 = _random_concept(rng, "x")
            c2 = _random_concept(rng, "y")
            breakdown = knowledge.knowledge_symbiosis_gain([c1], [c2])
            assert breakdown.total == _count_terms(c1, c2)


def test_criterion_5_layered_composition(capsys):
    with verdict(capsys, 5, "layered composition counts"):
        for n in range(2, 7):
            base = knowledge.KnowledgeBase(
                concepts=tuple(
                    knowledge.concept(f"c{i}", [f"a{i}"]) for i in range(n)
                )
            )
            once = knowledge.compose_layer(base)
            assert len(once.layers[-1]) == math.comb(n, 2)
            twice = knowledge.compose_layer(once)
            assert len(twice.layers[-1]) == math.comb(math.comb(n, 2), 2)


def _demo_dispatcher() -> him.Dispatcher:
    d = him.Dispatcher()
    d.register_event(him.EventSpec("tick", him.EventType.TIMER))
    d.register_event(him.EventSpec("nudge", him.EventType.EXTERNAL_STIMULUS))
    d.register_event(him.EventSpec("idle", him.EventType.INTERNAL))
    d.register(him.BehaviorBinding("tick", "log_time", him.taxon_by_tag("Time-driven")))
    d.register(him.BehaviorBinding("tick", "replan", him.taxon_by_tag("Goal-driven")))
    d.register(him.BehaviorBinding("nudge", "steady", him.taxon_by_tag("Feedback-modulated")))
    return d


def test_criterion_6_taxonomy_and_dispatch(capsys):
    with verdict(capsys, 6, "behavior taxonomy and dispatch"):
        taxa = him.taxonomy()
        assert len(taxa) == 16
        by_level = Counter(t.level for t in taxa)
        assert [by_level[level] for level in (1, 2, 3, 4, 5)] == [1, 3, 3, 5, 4]

        chain = [
            him.capability_set(c)
            for c in (
                him.Category.REFLEXIVE,
                him.Category.IMPERATIVE,
                him.Category.ADAPTIVE,
                him.Category.AUTONOMOUS,
                him.Category.COGNITIVE,
            )
        ]
        assert [len(s) for s in chain] == [1, 4, 7, 12, 16]
        for lower, upper in zip(chain, chain[1:]):
            assert lower < upper

        det = him.Determinism.DETERMINISTIC
        ind = him.Determinism.INDETERMINISTIC
        assert him.classify(det, det) is him.Category.REFLEXIVE
        assert him.classify(det, ind) is him.Category.IMPERATIVE
        assert him.classify(ind, det) is him.Category.ADAPTIVE
        assert him.classify(ind, ind) is him.Category.AUTONOMOUS

        events = [(0, "tick"), (2, "nudge"), (5, "idle"), (9, "tick")]
        blobs = {
            json.dumps(_demo_dispatcher().dispatch(events).to_dicts()).encode("utf-8")
            for _ in range(10)
        }
        assert len(blobs) == 1


def _random_tree(rng: random.Random, counter, budget: int):
    """A random layered tree plus its leaf systems in document order."""

    if budget == 0 or rng.random() < 0.35:
        i = next(counter)
        system = model.new_system(f"s{i}", [f"c{i}"])
        return topology.leaf(system), [system]
    parts, seen = [], []
    for _ in range(rng.randint(1, 4)):
        node, inner = _random_tree(rng, counter, budget - 1)
        parts.append(node)
        seen.extend(inner)
    return topology.abstract_up(f"n{next(counter)}", parts), seen


def test_criterion_7_topology_flatten(capsys):
    with verdict(capsys, 7, "recursive topology flatten"):
        rng = random.Random(7171)
        for _ in range(200):
            tree, recorded = _random_tree(rng, itertools.count(), 5)
            assert tree.depth <= 5
            flattened = topology.leaves(tree)
            assert [s.name for s in flattened] == [s.name for s in recorded]
            assert Counter(s.name for s in flattened) == Counter(
                s.name for s in recorded
            )


def test_criterion_8_predator_prey(capsys):
    with verdict(capsys, 8, "predator-prey integration"):
        params = dynamics.LVParams(0.01, 1.0, 1.0, 0.02)
        initial = dynamics.LVState(0.0, 10.0, 200.0)

        run = dynamics.simulate(params, initial, h=1e-3, steps=50_000)
        assert dynamics.relative_drift(run) <= 1e-6

        coarse = dynamics.simulate(params, initial, h=0.01, steps=500)
        fine = dynamics.simulate(params, initial, h=0.005, steps=1000)
        order = math.log2(
            dynamics.relative_drift(coarse) / dynamics.relative_drift(fine)
        )
        assert order >= 3.5

        prey_peaks = dynamics.local_maxima([s.n_g for s in run.samples])
        predator_peaks = dynamics.local_maxima([s.n_l for s in run.samples])
        merged = sorted(
            [(i, "prey") for i in prey_peaks]
            + [(i, "predator") for i in predator_peaks]
        )
        labels = [kind for _, kind in merged]
        assert len(labels) >= 10
        assert labels[0] == "prey"
        for earlier, later in zip(labels, labels[1:]):
            assert earlier != later

        eq = dynamics.equilibrium(params)
        assert (eq.n_l, eq.n_g) == (50.0, 100.0)
        still = dynamics.simulate(params, eq, h=1e-3, steps=2_000)
        for s in still.samples:
            assert abs(s.n_l - 50.0) <= 1e-10
            assert abs(s.n_g - 100.0) <= 1e-10


def test_criterion_9_dsl_round_trip_and_cli(capsys):
    with verdict(capsys, 9, "dsl round-trip and cli"):
        files = sorted(CORPUS.glob("*.sas"))
        assert len(files) >= 10

        seen_codes: set[str] = set()
        kinds: set[str] = set()
        for path in files:
            first = dsl.parse_file(str(path))
            seen_codes.update(d.code for d in first.diagnostics)
            if first.model is None:
                continue
            m = first.model
            if m.systems:
                kinds.add("system")
            if m.concepts:
                kinds.add("concept")
            if m.knowledge:
                kinds.add("knowledge")
            if m.events:
                kinds.add("event")
            if m.bindings:
                kinds.add("bind")
            text = dsl.serialize(m)
            second = dsl.parse(text)
            assert second.model is not None
            assert second.model == m
            assert dsl.serialize(second.model) == text

        assert kinds == {"system", "concept", "knowledge", "event", "bind"}
        assert seen_codes == set(dsl.ALL_CODES)

        exe = shutil.which("sascalc")
        argv = [exe] if exe else [sys.executable, "-m", "sascalc.cli"]
        proc = subprocess.run(
            argv + ["gain", "--n1", "3", "--n2", "2"],
            capture_output=True,
            timeout=120,
        )
        assert proc.returncode == 0
        assert proc.stdout == b'{"gain":12}\n'
