"""The simplified kernel for k-regular bipartite graphs.

With k colors on a k-regular graph every two-color subgraph of a proper
coloring is a union of even alternating cycles, an almost coloring always has
exactly two deficient vertices, and those two are the ends of one maximal
alternating path.
"""
from __future__ import annotations

from fractions import Fraction

from .chain import HALF, ONE, FOption, GeneralKernel
from .coloring import ContractError, alternating_walk, deficiencies, validate
from .graph import BipartiteGraph, Coloring, InputError
from .twocolor import Component, SubpathMenu


def assert_regular(graph: BipartiteGraph, k: int) -> None:
    if graph.n_left != graph.n_right:
        raise InputError(f"vertex classes differ in size: {graph.n_left} vs {graph.n_right}")
    bad = [v for v in graph.vertices if graph.degree(v) != k]
    if bad:
        raise InputError(f"graph is not {k}-regular at vertices {bad}")


def is_regular(graph: BipartiteGraph, k: int) -> bool:
    try:
        assert_regular(graph, k)
    except InputError:
        return False
    return True


def deficiency_pair(graph: BipartiteGraph, coloring: Coloring) -> tuple[int, int, list[int]]:
    """The two deficient vertices of an almost coloring and the alternating path joining them."""
    status = validate(graph, coloring)
    if not status.is_almost:
        raise ContractError(f"not almost: coloring is {status.kind}")
    defs = status.deficiencies
    if len(defs) != 2:
        raise ContractError(f"expected two deficient vertices, found {len(defs)}")
    d = defs[0]
    for partner in sorted(d.missing_colors):
        for e in d.edges:
            walk, end = alternating_walk(graph, coloring.colors, d.vertex, e, d.repeated_color, partner)
            if end == defs[1].vertex:
                return d.vertex, end, walk
    raise ContractError("deficient vertices are not joined by a maximal alternating path")


def closing_cycle(graph: BipartiteGraph, coloring: Coloring, v2: int, c_prime: int, c_second: int) -> Component:
    """The alternating (c', c'') walk from ``v2`` starting with c''; it closes into a cycle."""
    if c_prime == c_second or coloring.k < 3:
        raise ContractError("closing_cycle needs a third color")
    defs = deficiencies(graph, coloring.colors, coloring.k)
    if not defs or len(defs) != 2:
        raise ContractError("closing_cycle needs exactly two deficient vertices")
    by_v = {d.vertex: d for d in defs}
    if v2 not in by_v:
        raise ContractError(f"vertex {v2} is not deficient")
    d2 = by_v[v2]
    d1 = next(d for d in defs if d.vertex != v2)
    c = d1.repeated_color
    if d2.repeated_color != c_prime or c not in d2.missing_colors or c_prime not in d1.missing_colors:
        raise ContractError("deficiency types do not match (+c-c') and (+c'-c)")
    if graph.is_left(d1.vertex) != graph.is_left(v2):
        raise ContractError("deficient vertices lie in different vertex classes")
    if c_second in (c, c_prime):
        raise ContractError("c'' must differ from both deficiency colors")
    start = next((e for e in graph.adjacency[v2] if coloring.colors[e] == c_second), None)
    if start is None:
        raise ContractError(f"vertex {v2} has no {c_second} edge")
    walk, end = alternating_walk(graph, coloring.colors, v2, start, c_second, c_prime)
    if end != v2:
        raise ContractError("alternating walk did not close")
    verts = [v2]
    for e in walk[:-1]:
        verts.append(graph.other(e, verts[-1]))
    return Component("cycle", tuple(verts), tuple(walk))


class RegularKernel(GeneralKernel):
    """Kernel for k-regular equi-bipartite graphs colored with k colors."""

    name = "regular"
    subcases = ("a", "b")
    subcase_weight = HALF

    def __init__(self, graph: BipartiteGraph, k: int) -> None:
        assert_regular(graph, k)
        super().__init__(graph, k)

    def single_menu(self, case, H) -> SubpathMenu:
        for comp in H.components:
            if comp.kind != "cycle":
                raise ContractError("two-color subgraph of a regular coloring has a path component")
        return SubpathMenu(H, "cycles" if case == "two" else "even")

    def menu(self, case, subcase, H):
        return self.single_menu(case, H)

    def _three_options(self, S, defs, c, cp, cpp) -> list[FOption]:
        if len(defs) == 2:
            return [FOption((("vertex", d.vertex),), HALF, ("cycle", d.vertex)) for d in defs]
        if defs:
            return [FOption((), ONE, ("nothing",))]
        verts = [v for v in self.graph.vertices if self.graph.adjacency[v]]
        opts = []
        for u in verts:
            fs = self.h_edges_at(S, u, c, cp)
            w = Fraction(1, len(verts) * len(fs))
            opts += [FOption((("vertex", u), ("f_edge", f)), w, ("kempe", u, f)) for f in fs]
        return opts

    def action_edges(self, S, action, cpp):
        kind = action[0]
        if kind == "cycle":
            v = action[1]
            d = next(d for d in self._defs(S) if d.vertex == v)
            ct = d.repeated_color
            e = self.edge_of_color(S, v, cpp)
            if e is None:
                raise ContractError(f"deficient vertex {v} has no {cpp} edge")
            walk, _ = alternating_walk(self.graph, S, v, e, cpp, ct)
            return tuple(walk), ct, cpp
        if kind == "kempe":
            _, u, f = action
            e = self.edge_of_color(S, u, cpp)
            walk, _ = alternating_walk(self.graph, S, u, e, cpp, S[f])
            return tuple(walk), S[f], cpp
        return super().action_edges(S, action, cpp)
