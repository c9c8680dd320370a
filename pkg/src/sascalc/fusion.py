"""Symbiotic fusion of two systems and its relation gain.

Fusing disjoint systems merges their parts and adds every cross pair in
both directions to the component relations. The number of added pairs is
the symbiotic gain: 2 * |C1| * |C2|, strictly positive whenever both sides
have components, which is what makes the fusion symbiotic rather than a
plain union.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OverlappingBehaviors, OverlappingComponents
from .model import RelationKind, RelationSet, System

FUSION_JOINT = "⊞"  # boxed plus, joins operand names


@dataclass(frozen=True)
class FusionResult:
    fused: System
    delta: RelationSet
    gain: int


def symbiotic_gain(n1: int, n2: int) -> int:
    """Closed-form gain for component counts: 2 * n1 * n2."""

    if n1 < 0 or n2 < 0:
        raise ValueError("component counts must be non-negative")
    return 2 * n1 * n2


def fuse(s1: System, s2: System) -> FusionResult:
    """Fuse two systems with disjoint component and behavior sets.

    The fused system unions every part of both operands and extends the
    component relations with the cross pairs C1 x C2 and C2 x C1. The
    returned delta holds exactly those added pairs.
    """

    comp_overlap = s1.components & s2.components
    if comp_overlap:
        raise OverlappingComponents(frozenset(comp_overlap))
    beh_overlap = s1.behavior_names & s2.behavior_names
    if beh_overlap:
        raise OverlappingBehaviors(frozenset(beh_overlap))

    cross = {(a, b) for a in s1.components for b in s2.components}
    cross |= {(b, a) for a in s1.components for b in s2.components}
    delta = RelationSet(RelationKind.COMPONENT, frozenset(cross))

    fused = System(
        name=f"{s1.name}{FUSION_JOINT}{s2.name}",
        components=s1.components | s2.components,
        behaviors=s1.behaviors | s2.behaviors,
        rc=s1.rc.union(s2.rc, delta),
        rb=s1.rb.union(s2.rb),
        rf=s1.rf.union(s2.rf),
        ri=s1.ri.union(s2.ri),
        ro=s1.ro.union(s2.ro),
        environment=s1.environment | s2.environment,
    )
    return FusionResult(fused=fused, delta=delta, gain=len(delta))


def gain_oracle(s1: System, s2: System) -> int:
    """Gain by brute enumeration, no closed form.

    Counts the full Cartesian square over the united components and
    subtracts each operand's own square. Exists so tests can check the
    closed form against something that cannot share its bugs.
    """

    if s1.components & s2.components:
        raise OverlappingComponents(frozenset(s1.components & s2.components))

    union = s1.components | s2.components
    total = sum(1 for a in union for b in union)
    own1 = sum(1 for a in s1.components for b in s1.components)
    own2 = sum(1 for a in s2.components for b in s2.components)
    return total - own1 - own2
