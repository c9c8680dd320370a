"""Recursive layered structure over systems.

Systems nest: a node either wraps one concrete system (a leaf, depth 0) or
abstracts a non-empty list of child nodes (depth one above the deepest
child). ``big_r_fold`` is the generic left fold used to aggregate across
layers with any binary combiner.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import EmptyParts
from .model import System

T = TypeVar("T")


@dataclass(frozen=True)
class LayeredSystem:
    name: str
    depth: int
    system: System | None = None
    children: tuple["LayeredSystem", ...] = ()

    def __post_init__(self) -> None:
        # Exactly one of: a concrete system at depth 0, or children above it.
        if self.system is not None:
            if self.children or self.depth != 0:
                raise ValueError("a leaf wraps one system at depth 0")
        else:
            if not self.children:
                raise ValueError("a non-leaf needs at least one child")
            want = 1 + max(c.depth for c in self.children)
            if self.depth != want:
                raise ValueError(f"depth must be {want}, got {self.depth}")

    def is_leaf(self) -> bool:
        return self.system is not None


def leaf(system: System) -> LayeredSystem:
    return LayeredSystem(name=system.name, depth=0, system=system)


def abstract_up(name: str, parts: Sequence[LayeredSystem]) -> LayeredSystem:
    """Wrap nodes into one node a layer above the deepest part."""

    if not parts:
        raise EmptyParts("abstract_up needs at least one part")
    depth = 1 + max(p.depth for p in parts)
    return LayeredSystem(name=name, depth=depth, children=tuple(parts))


def refine_down(node: LayeredSystem) -> list[LayeredSystem]:
    """One step of refinement: the children, or the leaf itself."""

    if node.is_leaf():
        return [node]
    return list(node.children)


def leaves(node: LayeredSystem) -> list[System]:
    """All concrete systems under a node, in document order."""

    if node.is_leaf():
        assert node.system is not None
        return [node.system]
    out: list[System] = []
    for child in node.children:
        out.extend(leaves(child))
    return out


def big_r_fold(items: Iterable[T], combine: Callable[[T, T], T]) -> T:
    """Left fold over a non-empty sequence with a binary combiner."""

    seq = list(items)
    if not seq:
        raise EmptyParts("fold over empty collection")
    return reduce(combine, seq)
