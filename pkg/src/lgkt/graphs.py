"""Finite labelled graphs and the set combinatorics built on them.

A labelled graph is a finite directed graph together with a label on each
edge; words over the label alphabet act on vertex sets through relative
ranges r(A, w) = endpoints of w-labelled paths starting in A.  This module
provides the graph value type, structural validation (left-resolving, sinks,
sources), validation of candidate accommodating set families, and the
generated family built from the ranges of single letters and the sinks.

Vertex and label identifiers are strings; every ordering used anywhere is
lexicographic on identifiers, fixed at parse time, so downstream matrices are
reproducible bit for bit.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

Edge = tuple[str, str, str]  # (source, label, target)
VertexSet = frozenset[str]


class GraphError(Exception):
    """Malformed graph documents or violated graph preconditions."""


@dataclass(frozen=True)
class LabelledGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    alphabet: tuple[str, ...]

    def vertex_set(self) -> VertexSet:
        return frozenset(self.vertices)

    def to_document(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges]}


def make_graph(edges: Iterable[Sequence[str]],
               vertices: Iterable[str] | None = None) -> LabelledGraph:
    """Build a canonical LabelledGraph.

    Vertices may be declared explicitly (then every edge endpoint must be
    declared, and isolated vertices are allowed) or inferred from the edges.
    The alphabet is always exactly the set of labels occurring on edges.
    Exact duplicate (source, label, target) triples are rejected: an edge set
    with a labelling map cannot distinguish them, so they would silently
    distort every count downstream.
    """
    edge_list: list[Edge] = []
    for e in edges:
        if len(e) != 3:
            raise GraphError(f"edge {e!r} is not a [source, label, target] triple")
        s, a, t = (str(x) for x in e)
        edge_list.append((s, a, t))
    seen = set()
    for e in edge_list:
        if e in seen:
            raise GraphError(f"duplicate edge triple {e!r}")
        seen.add(e)
    if vertices is None:
        vset = {s for s, _, _ in edge_list} | {t for _, _, t in edge_list}
    else:
        vset = {str(v) for v in vertices}
        for s, a, t in edge_list:
            if s not in vset:
                raise GraphError(f"edge source {s!r} is not a declared vertex")
            if t not in vset:
                raise GraphError(f"edge target {t!r} is not a declared vertex")
    alphabet = sorted({a for _, a, _ in edge_list})
    return LabelledGraph(tuple(sorted(vset)), tuple(sorted(edge_list)),
                         tuple(alphabet))


def parse_graph(document: str | Mapping) -> LabelledGraph:
    """Parse a graph document (JSON text or an already-decoded mapping)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphError(f"graph document is not valid JSON: {exc}") from exc
    if not isinstance(document, Mapping):
        raise GraphError("graph document must be a JSON object")
    unknown = set(document) - {"vertices", "edges"}
    if unknown:
        raise GraphError(f"unknown graph document fields: {sorted(unknown)}")
    edges = document.get("edges", [])
    if not isinstance(edges, (list, tuple)):
        raise GraphError('"edges" must be a list of [source, label, target]')
    return make_graph(edges, document.get("vertices"))


def serialize_graph(g: LabelledGraph) -> str:
    """Canonical JSON text; parse_graph(serialize_graph(g)) == g."""
    return json.dumps(g.to_document(), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# adjacency caches (graphs are immutable and hashable)


@functools.lru_cache(maxsize=256)
def _edges_by_source_label(g: LabelledGraph) -> dict[tuple[str, str], tuple[str, ...]]:
    out: dict[tuple[str, str], list[str]] = {}
    for s, a, t in g.edges:
        out.setdefault((s, a), []).append(t)
    return {k: tuple(v) for k, v in out.items()}


@functools.lru_cache(maxsize=256)
def _in_edges(g: LabelledGraph) -> dict[str, tuple[Edge, ...]]:
    out: dict[str, list[Edge]] = {v: [] for v in g.vertices}
    for e in g.edges:
        out[e[2]].append(e)
    return {k: tuple(v) for k, v in out.items()}


@functools.lru_cache(maxsize=256)
def _out_degree(g: LabelledGraph) -> dict[str, int]:
    deg = {v: 0 for v in g.vertices}
    for s, _, _ in g.edges:
        deg[s] += 1
    return deg


# ---------------------------------------------------------------------------
# ranges


def relative_range(g: LabelledGraph, a_set: Iterable[str],
                   word: Sequence[str]) -> VertexSet:
    """r(A, word): endpoints of word-labelled paths starting in A.

    Computed letter by letter via r(A, wa) = r(r(A, w), a).  Letters outside
    the alphabet simply yield the empty set; the function is total.
    """
    if len(word) == 0:
        raise GraphError("relative_range needs a nonempty word")
    current = set(a_set)
    by_sl = _edges_by_source_label(g)
    for a in word:
        nxt: set[str] = set()
        for v in current:
            nxt.update(by_sl.get((v, a), ()))
        current = nxt
        if not current:
            break
    return frozenset(current)


def letter_range(g: LabelledGraph, a: str) -> VertexSet:
    """r(a): endpoints of all a-labelled edges."""
    return relative_range(g, g.vertices, (a,))


def outgoing_labels(g: LabelledGraph, a_set: Iterable[str]) -> frozenset[str]:
    """L(A E^1): labels carried by edges leaving A."""
    aset = set(a_set)
    return frozenset(a for s, a, _ in g.edges if s in aset)


def sinks(g: LabelledGraph) -> tuple[str, ...]:
    deg = _out_degree(g)
    return tuple(v for v in g.vertices if deg[v] == 0)


def sources(g: LabelledGraph) -> tuple[str, ...]:
    ins = _in_edges(g)
    return tuple(v for v in g.vertices if not ins[v])


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Flag:
    value: bool
    witness: Optional[str] = None


@dataclass(frozen=True)
class ValidationReport:
    flags: dict[str, Flag] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Flag:
        return self.flags[name]

    def value(self, name: str) -> bool:
        return self.flags[name].value

    def to_document(self) -> dict:
        return {name: {"value": f.value, "witness": f.witness}
                for name, f in sorted(self.flags.items())}


def format_set(s: Iterable[str]) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def validate_graph(g: LabelledGraph, horizon: int = 1) -> ValidationReport:
    """Graph-level structural flags.

    left_resolving fails with witness (v, a) when two incoming edges at v
    share the label a.  set_finite / receiver set_finite are reported true
    for interface uniformity: on a finite graph every label set in sight is
    finite, whatever the horizon.
    """
    if horizon < 1:
        raise GraphError("horizon must be >= 1")
    flags: dict[str, Flag] = {}

    lr_witness = None
    for v, incoming in _in_edges(g).items():
        seen: dict[str, Edge] = {}
        for e in incoming:
            if e[1] in seen:
                lr_witness = f"vertex {v}, label {e[1]}"
                break
            seen[e[1]] = e
        if lr_witness:
            break
    flags["left_resolving"] = Flag(lr_witness is None, lr_witness)

    sink_list = sinks(g)
    flags["has_sinks"] = Flag(bool(sink_list),
                              f"vertex {sink_list[0]}" if sink_list else None)
    source_list = sources(g)
    flags["has_sources"] = Flag(bool(source_list),
                                f"vertex {source_list[0]}" if source_list else None)
    flags["set_finite_at_horizon"] = Flag(True)
    flags["receiver_set_finite_at_horizon"] = Flag(True)
    return ValidationReport(flags)


def _representable(fam: Sequence[VertexSet], target: VertexSet) -> bool:
    """Is target a union of family members?  (Union closure is kept lazy.)"""
    if not target:
        return True
    covered: set[str] = set()
    for m in fam:
        if m <= target:
            covered |= m
    return covered == set(target)


def validate_family(g: LabelledGraph, fam: Sequence[VertexSet]) -> ValidationReport:
    """Check a candidate family: accommodating, weakly left-resolving, regular.

    Single letters suffice throughout.  Accommodating: once every r(a) and
    every single-letter relative range of a member is a union of members and
    pairwise intersections are too, closure for longer words follows from
    r(A, wa) = r(r(A, w), a).  Weakly left-resolving: the single-letter check
    on pairs extends to all words by the same recursion, because the
    intermediate ranges are again (unions of) members.  Regular is the direct
    pairwise test: members with the same finite outgoing label set, no sinks,
    and identical single-letter ranges must be equal.
    """
    fam = [frozenset(s) for s in fam]
    if len(set(fam)) != len(fam):
        raise GraphError("family contains duplicate sets")
    if not fam:
        raise GraphError("family must be nonempty")
    for s in fam:
        if not s <= g.vertex_set():
            raise GraphError(f"family member {format_set(s)} is not a vertex set")
    flags: dict[str, Flag] = {}
    members = [s for s in fam if s]  # the empty set is implicitly available

    acc_witness = None
    for a in g.alphabet:
        if not _representable(members, letter_range(g, a)):
            acc_witness = f"r({a}) not representable"
            break
    if acc_witness is None:
        for s in members:
            for a in g.alphabet:
                if not _representable(members, relative_range(g, s, (a,))):
                    acc_witness = (f"r({format_set(s)},{a}) not representable")
                    break
            if acc_witness:
                break
    if acc_witness is None:
        for i, s in enumerate(members):
            for t in members[i + 1:]:
                if not _representable(members, s & t):
                    acc_witness = (f"{format_set(s)} intersect {format_set(t)}"
                                   " not representable")
                    break
            if acc_witness:
                break
    flags["accommodating"] = Flag(acc_witness is None, acc_witness)

    wlr_witness = None
    for i, s in enumerate(members):
        for t in members[i + 1:]:
            for a in g.alphabet:
                lhs = relative_range(g, s & t, (a,))
                rhs = relative_range(g, s, (a,)) & relative_range(g, t, (a,))
                if lhs != rhs:
                    wlr_witness = (f"r({format_set(s)} intersect {format_set(t)},"
                                   f"{a}) != intersection of ranges")
                    break
            if wlr_witness:
                break
        if wlr_witness:
            break
    flags["weakly_left_resolving"] = Flag(wlr_witness is None, wlr_witness)

    sink_set = set(sinks(g))
    reg_witness = None
    for i, s in enumerate(members):
        for t in members[i + 1:]:
            if s & sink_set or t & sink_set:
                continue
            ls, lt = outgoing_labels(g, s), outgoing_labels(g, t)
            if ls != lt:
                continue
            if all(relative_range(g, s, (a,)) == relative_range(g, t, (a,))
                   for a in ls):
                reg_witness = (f"{format_set(s)} and {format_set(t)} share all "
                               "single-letter ranges")
                break
        if reg_witness:
            break
    flags["regular"] = Flag(reg_witness is None, reg_witness)
    return ValidationReport(flags)


def build_e0minus(g: LabelledGraph) -> tuple[VertexSet, ...]:
    """The generated family: letter ranges and sink singletons, closed under
    single-letter relative ranges and pairwise intersections.

    Union closure is deliberately lazy (consumers that need genuine union
    closure reconstruct it from these generators); with unions added this is
    the smallest accommodating family containing every r(w) and the sink
    singletons.  The closure is bounded by 2^|vertices|; the explicit cap is
    a guard against implementation bugs, not a reachable state.
    """
    family: set[VertexSet] = set()
    queue: list[VertexSet] = []

    def add(s: VertexSet):
        if s and s not in family:
            family.add(s)
            queue.append(s)

    for a in g.alphabet:
        add(letter_range(g, a))
    for v in sinks(g):
        add(frozenset({v}))

    cap = 2 ** len(g.vertices) + 1
    steps = 0
    while queue:
        steps += 1
        if steps > cap:
            raise GraphError("closure exceeded 2^|vertices| iterations; "
                             "this indicates a bug in the closure step")
        s = queue.pop()
        for a in g.alphabet:
            add(relative_range(g, s, (a,)))
        for t in list(family):
            add(s & t)
    return tuple(sorted(family, key=lambda s: tuple(sorted(s))))
