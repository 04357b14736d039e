"""Left-resolving predecessor covers of sofic presentations.

Given a finite presentation of a shift (a labelled graph with no sinks or
sources), the predecessor cover is built by determinizing the reversed
graph: states are the nonempty predecessor sets delta(P, a) = sources of
a-edges into P, seeded with the full vertex set, and the kept states are
those reached by arbitrarily long words (the eventual image of the subset
transition).  The cover carries an edge delta(P, a) --a--> P, so the source
of an edge is a function of (target, label) and the output is left-resolving
by construction; this is checked, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import (GraphError, LabelledGraph, VertexSet, make_graph,
                     validate_graph)


class CoverError(Exception):
    pass


@dataclass(frozen=True)
class CoverResult:
    cover: LabelledGraph
    state_map: dict[str, VertexSet]
    trimmed: bool

    def to_document(self) -> dict:
        return {
            "graph": self.cover.to_document(),
            "state_map": {v: sorted(s) for v, s in self.state_map.items()},
            "trimmed": self.trimmed,
        }


def _delta(g: LabelledGraph, state: VertexSet, letter: str) -> VertexSet:
    return frozenset(s for s, a, t in g.edges if a == letter and t in state)


def predecessor_cover(g: LabelledGraph, state_cap: int | None = None) -> CoverResult:
    """Subset construction over predecessor sets.

    The input must be a finite sink/source-free presentation.  States are
    bounded by 2^|vertices|; the cap (default that bound) exists purely as a
    diagnostic guard.
    """
    report = validate_graph(g)
    if report.value("has_sinks"):
        raise CoverError(f"input has a sink ({report['has_sinks'].witness})")
    if report.value("has_sources"):
        raise CoverError(f"input has a source ({report['has_sources'].witness})")
    if not g.edges:
        raise CoverError("input graph has no edges")
    if state_cap is None:
        state_cap = 2 ** len(g.vertices)

    # reachable nonempty delta-images of the full vertex set
    full = g.vertex_set()
    reachable: set[VertexSet] = set()
    frontier = [full]
    while frontier:
        state = frontier.pop()
        for a in g.alphabet:
            nxt = _delta(g, state, a)
            if nxt and nxt not in reachable:
                if len(reachable) >= state_cap:
                    raise CoverError(f"subset construction exceeded {state_cap} states")
                reachable.add(nxt)
                frontier.append(nxt)

    # eventual image: keep states reached by arbitrarily long words
    # delta never leaves the reachable part, so this chain is decreasing
    current = set(reachable)
    while True:
        nxt = {_delta(g, p, a) for p in current for a in g.alphabet}
        nxt.discard(frozenset())
        if nxt == current:
            break
        current = nxt
    states = sorted(current, key=lambda s: tuple(sorted(s)))
    if not states:
        raise CoverError("no persistent predecessor states; input presents "
                         "no bi-infinite behaviour")

    width = max(2, len(str(len(states) - 1)) + 1)
    names = {s: f"q{str(i).zfill(width - 1)}" for i, s in enumerate(states)}
    edges = []
    for p in states:
        for a in g.alphabet:
            q = _delta(g, p, a)
            if q:
                # q is again in the eventual image: it has arbitrarily long
                # incoming words whenever p does
                edges.append((names[q], a, names[p]))
    cover = make_graph(edges, vertices=names.values())

    out_report = validate_graph(cover)
    if not out_report.value("left_resolving"):
        raise CoverError("internal error: cover is not left-resolving "
                         f"({out_report['left_resolving'].witness})")
    if out_report.value("has_sinks") or out_report.value("has_sources"):
        raise CoverError("internal error: cover has stranded states")
    return CoverResult(cover=cover,
                       state_map={names[s]: s for s in states},
                       trimmed=False)


def trim_essential(g: LabelledGraph) -> LabelledGraph:
    """Delete sources and sinks repeatedly; the result may be empty."""
    vertices = set(g.vertices)
    edges = set(g.edges)
    while True:
        out_deg = {v: 0 for v in vertices}
        in_deg = {v: 0 for v in vertices}
        for s, _, t in edges:
            out_deg[s] += 1
            in_deg[t] += 1
        stranded = {v for v in vertices if out_deg[v] == 0 or in_deg[v] == 0}
        if not stranded:
            break
        vertices -= stranded
        edges = {e for e in edges if e[0] in vertices and e[2] in vertices}
    return make_graph(sorted(edges), vertices=sorted(vertices))
