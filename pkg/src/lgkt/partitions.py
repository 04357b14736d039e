"""Generalized-vertex partitions by backward refinement.

Two vertices are equivalent at level l when they receive exactly the same
labelled words of length at most l.  On a left-resolving graph each vertex
has at most one incoming edge per letter, so the level-(l+1) class of a
vertex is determined by the set of (predecessor class at level l, letter)
pairs over its incoming edges; refinement therefore runs one backward sweep
per level.  lambda_set is the brute-force oracle: it enumerates backward
paths outright and is only meant for small inputs and tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .graphs import (LabelledGraph, VertexSet, _in_edges, format_set,
                     relative_range, validate_graph)


class PartitionError(Exception):
    """Violated preconditions or internal refinement inconsistencies."""


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint classes covering the vertex set, canonically ordered.

    Classes are keyed by their minimal vertex identifier and sorted by that
    key, which fixes the basis order of every matrix built on them.
    """

    level: int
    classes: tuple[VertexSet, ...]
    class_of: dict[str, int] = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.classes == other.classes

    def __len__(self):
        return len(self.classes)


def _make_partition(level: int, classes: Sequence[VertexSet]) -> Partition:
    ordered = tuple(sorted(classes, key=lambda c: min(c)))
    class_of = {v: i for i, c in enumerate(ordered) for v in c}
    return Partition(level, ordered, class_of)


@dataclass(frozen=True)
class PartitionTower:
    """Partitions for levels 1..horizon with stabilization metadata.

    stabilized_at is the least s with partition(s) == partition(s+1); once
    two consecutive levels agree the refinement map is the identity forever
    (the level-(l+1) signatures are computed from level-l classes, so equal
    inputs give equal outputs), hence partition(l) == partition(s) for l >= s.
    """

    partitions: tuple[Partition, ...]
    horizon: int
    stabilized_at: int | None = None

    def at_level(self, level: int) -> Partition:
        if level < 1:
            raise PartitionError("levels are 1-based")
        if level <= len(self.partitions):
            return self.partitions[level - 1]
        if self.stabilized_at is not None:
            return self.partitions[-1]
        raise PartitionError(
            f"level {level} beyond horizon {self.horizon} of an unstabilized tower")

    def to_document(self) -> dict:
        return {
            "stabilized_at": self.stabilized_at,
            "horizon": self.horizon,
            "levels": [{"level": p.level,
                        "classes": [sorted(c) for c in p.classes]}
                       for p in self.partitions],
        }

    def dump_text(self) -> str:
        lines = []
        for p in self.partitions:
            for c in p.classes:
                lines.append(f"level {p.level}: {format_set(c)}")
        tail = (f"stabilized at level {self.stabilized_at}"
                if self.stabilized_at is not None
                else f"not stabilized within horizon {self.horizon}")
        lines.append(tail)
        return "\n".join(lines) + "\n"


def lambda_set(g: LabelledGraph, v: str, ell: int,
               cap: int = 10 ** 7) -> frozenset[str]:
    """All labelled words of length <= ell carried by some path ending at v.

    Exhaustive backward path enumeration; refuses when |edges|^ell exceeds
    the cap.  This is the testing oracle for refine_tower and must stay
    independent of the refinement code.
    """
    if v not in g.vertices:
        raise PartitionError(f"unknown vertex {v!r}")
    if ell < 1:
        raise PartitionError("ell must be >= 1")
    if len(g.edges) ** ell > cap:
        raise PartitionError(
            f"enumeration bound |E|^{ell} exceeds the cap {cap}")
    ins = _in_edges(g)
    words: set[tuple[str, ...]] = set()
    stack: list[tuple[str, tuple[str, ...]]] = [(v, ())]
    while stack:
        vertex, suffix = stack.pop()
        if len(suffix) == ell:
            continue
        for (src, label, _tgt) in ins[vertex]:
            word = (label,) + suffix
            words.add(word)
            stack.append((src, word))
    return frozenset("".join(w) for w in words)


def _initial_partition(g: LabelledGraph) -> Partition:
    by_labels: dict[frozenset[str], set[str]] = {}
    ins = _in_edges(g)
    for v in g.vertices:
        key = frozenset(e[1] for e in ins[v])
        by_labels.setdefault(key, set()).add(v)
    return _make_partition(1, [frozenset(c) for c in by_labels.values()])


def _refine_once(g: LabelledGraph, part: Partition) -> Partition:
    ins = _in_edges(g)
    by_sig: dict[frozenset[tuple[int, str]], set[str]] = {}
    for v in g.vertices:
        sig = frozenset((part.class_of[e[0]], e[1]) for e in ins[v])
        by_sig.setdefault(sig, set()).add(v)
    return _make_partition(part.level + 1,
                           [frozenset(c) for c in by_sig.values()])


def refine_tower(g: LabelledGraph, max_level: int = 32) -> PartitionTower:
    """Partitions at levels 1..L, L = min(max_level, stabilization + 1).

    Requires a left-resolving graph with no sinks and no sources (with a
    source the math still works, but the downstream theory assumes none, so
    we refuse rather than guess; with two incoming edges sharing a label the
    signature refinement would be finer than word-equality, so left-resolving
    is a hard precondition, not merely conventional).
    """
    if max_level < 1:
        raise PartitionError("max_level must be >= 1")
    report = validate_graph(g)
    for flag_name, wanted in (("left_resolving", True), ("has_sinks", False),
                              ("has_sources", False)):
        flag = report[flag_name]
        if flag.value != wanted:
            raise PartitionError(
                f"precondition failed: {flag_name}={flag.value}"
                + (f" (witness: {flag.witness})" if flag.witness else ""))

    parts = [_initial_partition(g)]
    stabilized = None
    while len(parts) < max_level:
        nxt = _refine_once(g, parts[-1])
        parts.append(nxt)
        if nxt == parts[-2]:
            stabilized = parts[-2].level
            break
    if stabilized is None and len(g.vertices) == len(parts[-1]):
        # discrete partitions cannot refine further; record the witness level
        extra = _refine_once(g, parts[-1])
        if extra == parts[-1]:
            stabilized = parts[-1].level
            if len(parts) < max_level:
                parts.append(extra)
    return PartitionTower(tuple(parts), horizon=len(parts),
                          stabilized_at=stabilized)


def class_relative_range(g: LabelledGraph, tower: PartitionTower, level: int,
                         class_index: int, letter: str) -> tuple[int, ...]:
    """Indices of the level+1 classes whose disjoint union is r(class, letter).

    That the range is exactly a union of next-level classes is a theorem
    under the refine_tower preconditions, so any mismatch is reported as an
    internal consistency error rather than tolerated.
    """
    part = tower.at_level(level)
    nxt = tower.at_level(level + 1)
    if not 0 <= class_index < len(part.classes):
        raise PartitionError(f"no class {class_index} at level {level}")
    rng = relative_range(g, part.classes[class_index], (letter,))
    if not rng:
        return ()
    indices = sorted({nxt.class_of[v] for v in rng})
    union: set[str] = set()
    for i in indices:
        union |= nxt.classes[i]
    if union != set(rng):
        raise PartitionError(
            f"range of class {class_index} at level {level} under {letter!r} "
            "is not a union of next-level classes; refinement is inconsistent")
    return tuple(indices)
