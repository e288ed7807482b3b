"""Proper and almost edge colorings: validation, alternating walks, repair.

A vertex is *deficient* when exactly two of its edges share one color, all
its other edges have distinct colors, and at least one color is missing at
it.  A coloring is *almost* proper when one or two vertices are deficient
and every other vertex is conflict-free.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import BipartiteGraph, Coloring, InputError, check_coloring


class ContractError(ValueError):
    """An operation was called outside its documented preconditions."""


@dataclass(frozen=True)
class Deficiency:
    vertex: int
    repeated_color: int
    missing_colors: frozenset[int]
    edges: tuple[int, int]


@dataclass(frozen=True)
class ColoringStatus:
    kind: str  # "proper" | "almost" | "invalid"
    deficiencies: tuple[Deficiency, ...] = ()
    violators: tuple[int, ...] = ()

    @property
    def is_proper(self) -> bool:
        return self.kind == "proper"

    @property
    def is_almost(self) -> bool:
        return self.kind == "almost"

    @property
    def is_invalid(self) -> bool:
        return self.kind == "invalid"


def _vertex_check(graph: BipartiteGraph, cols: Sequence[int], k: int, v: int):
    """None if conflict-free, a Deficiency, or False for any other conflict."""
    inc = graph.adjacency[v]
    seen: dict[int, int] = {}
    dup = None
    for e in inc:
        c = cols[e]
        if c in seen:
            if dup is not None:
                return False
            dup = (c, seen[c], e)
        else:
            seen[c] = e
    if dup is None:
        return None
    c, e1, e2 = dup
    # a third edge of color c would have tripped the dup check above
    missing = frozenset(x for x in range(k) if x not in seen)
    if not missing:
        return False
    return Deficiency(v, c, missing, (min(e1, e2), max(e1, e2)))


def validate(graph: BipartiteGraph, coloring: Coloring) -> ColoringStatus:
    check_coloring(graph, coloring)
    defs: list[Deficiency] = []
    bad: list[int] = []
    for v in graph.vertices:
        r = _vertex_check(graph, coloring.colors, coloring.k, v)
        if r is None:
            continue
        if r is False:
            bad.append(v)
        else:
            defs.append(r)
    if not defs and not bad:
        return ColoringStatus("proper")
    if not bad and len(defs) <= 2:
        return ColoringStatus("almost", tuple(defs))
    return ColoringStatus("invalid", violators=tuple(sorted(bad + [d.vertex for d in defs])))


def is_proper(graph: BipartiteGraph, cols: Sequence[int]) -> bool:
    for inc in graph.adjacency:
        if len({cols[e] for e in inc}) != len(inc):
            return False
    return True


def deficiencies(graph: BipartiteGraph, cols: Sequence[int], k: int):
    """Deficiencies of an almost coloring, or None if some vertex has a worse conflict."""
    out = []
    for v, inc in enumerate(graph.adjacency):
        if len(inc) < 2:
            continue
        cs = [cols[e] for e in inc]
        if len(set(cs)) == len(cs):
            continue
        r = _vertex_check(graph, cols, k, v)
        if r is None:
            continue
        if r is False:
            return None
        out.append(r)
    return out


def color_edge_at(graph: BipartiteGraph, cols: Sequence[int], v: int, c: int) -> list[int]:
    return [e for e in graph.adjacency[v] if cols[e] == c]


def alternating_walk(
    graph: BipartiteGraph,
    cols: Sequence[int],
    start: int,
    first_edge: int,
    a: int,
    b: int,
    blocked: Iterable[int] = (),
) -> tuple[list[int], int]:
    """Maximal alternating (a, b) walk leaving ``start`` through ``first_edge``.

    The walk never reuses an edge and never enters ``blocked`` edges.  Where
    two unused edges of the required color meet the walk (only possible at a
    deficient vertex) the lower edge id is taken.  The walk stops when it
    comes back to ``start`` (a closed alternating cycle).  Returns the edge
    list and the final vertex.
    """
    used = set(blocked)
    used.add(first_edge)
    walk = [first_edge]
    v = graph.other(first_edge, start)
    last = cols[first_edge]
    while True:
        want = b if last == a else a
        nxt = None
        for e in graph.adjacency[v]:
            if cols[e] == want and e not in used:
                if nxt is None or e < nxt:
                    nxt = e
        if nxt is None:
            return walk, v
        used.add(nxt)
        walk.append(nxt)
        v = graph.other(nxt, v)
        if v == start:
            return walk, v
        last = want


def flip(cols: Sequence[int], edges: Iterable[int], a: int, b: int) -> tuple[int, ...]:
    out = list(cols)
    for e in edges:
        c = out[e]
        if c == a:
            out[e] = b
        elif c == b:
            out[e] = a
        else:
            raise ContractError(f"edge {e} has color {c}, not in ({a}, {b})")
    return tuple(out)


def repair_deficiencies(
    graph: BipartiteGraph,
    coloring: Coloring,
    color_context: Iterable[int] = (),
    picks: Sequence[int] | None = None,
    rng: random.Random | None = None,
) -> tuple[Coloring, list[list[int]]]:
    """Turn an almost coloring into a proper one by flipping alternating walks.

    Deficient vertices are processed in ascending id.  For the current vertex
    one of its two repeated edges is chosen (``picks[i]`` is 0 or 1 for the
    i-th walk; otherwise random with ``rng``; otherwise the lower edge) and the
    maximal alternating walk of the repeated color and a missing partner color
    is flipped.  The partner is the lowest missing color in ``color_context``,
    falling back to the lowest missing color overall.
    """
    status = validate(graph, coloring)
    if status.is_proper:
        return coloring, []
    if status.is_invalid:
        raise ContractError(f"not an almost coloring; violators {status.violators}")
    context = set(color_context)
    cols = coloring.colors
    walks: list[list[int]] = []
    for i in range(4):
        defs = deficiencies(graph, cols, coloring.k)
        if defs is None:
            raise ContractError("repair produced a coloring that is not almost proper")
        if not defs:
            return Coloring(cols, coloring.k), walks
        d = defs[0]
        partners = sorted(m for m in d.missing_colors if m in context) or sorted(d.missing_colors)
        partner = partners[0]
        if picks is not None:
            choice = picks[i]
        elif rng is not None:
            choice = rng.randrange(2)
        else:
            choice = 0
        walk, _ = alternating_walk(graph, cols, d.vertex, d.edges[choice], d.repeated_color, partner)
        cols = flip(cols, walk, d.repeated_color, partner)
        walks.append(walk)
    raise ContractError("deficiencies persisted after four walks")


def initial_coloring(graph: BipartiteGraph, k: int) -> Coloring:
    """A proper edge k-coloring built by alternating-path insertion (König)."""
    if k < graph.max_degree:
        raise InputError(f"infeasible color count: k={k} < max degree {graph.max_degree}")
    n = graph.n_vertices
    cols = [-1] * graph.n_edges
    at: list[dict[int, int]] = [dict() for _ in range(n)]  # vertex -> color -> edge

    for e, (u, w) in enumerate(graph.edges):
        free_u = [c for c in range(k) if c not in at[u]]
        free_w = [c for c in range(k) if c not in at[w]]
        common = sorted(set(free_u) & set(free_w))
        if common:
            c = common[0]
        else:
            a, b = free_u[0], free_w[0]
            # walk the (a, b) path from w; it cannot reach u in a bipartite graph
            path = []
            x, want = w, a
            while want in at[x]:
                f = at[x][want]
                path.append(f)
                x = graph.other(f, x)
                want = b if want == a else a
            for f in path:
                p, q = graph.edges[f]
                del at[p][cols[f]]
                del at[q][cols[f]]
            for f in path:
                cols[f] = b if cols[f] == a else a
                p, q = graph.edges[f]
                at[p][cols[f]] = f
                at[q][cols[f]] = f
            c = a
        cols[e] = c
        at[u][c] = e
        at[w][c] = e
    return Coloring(tuple(cols), k)


def color_classes(coloring: Coloring) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for e, c in enumerate(coloring.colors):
        out.setdefault(c, []).append(e)
    return out


def color_counts(coloring: Coloring) -> Counter:
    return Counter(coloring.colors)
