"""Two-color subgraphs and the selection menus built on them.

For colors ``c`` and ``c'`` the subgraph H keeps the edges of those two
colors.  In a proper or almost coloring every vertex has at most two such
edges, so H splits into paths and cycles.  Components are listed by their
smallest vertex id; a path is read from its smaller end vertex, a cycle from
its smallest vertex toward the smaller neighbor.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from math import comb
from typing import Iterable, Sequence

from .coloring import ContractError
from .graph import BipartiteGraph


@dataclass(frozen=True)
class Component:
    kind: str  # "path" | "cycle"
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class TwoColorSubgraph:
    colors: tuple[int, int]
    components: tuple[Component, ...]
    position: dict  # edge id -> (component index, position in component.edges)

    @property
    def edges(self) -> list[int]:
        return sorted(self.position)

    def endpoints(self) -> set[int]:
        """Vertices of degree one in H."""
        out = set()
        for comp in self.components:
            if comp.kind == "path":
                out.add(comp.vertices[0])
                out.add(comp.vertices[-1])
        return out


def two_color_subgraph(graph: BipartiteGraph, cols: Sequence[int], c: int, c_prime: int) -> TwoColorSubgraph:
    if c == c_prime:
        raise ContractError("two_color_subgraph needs two distinct colors")
    inc: dict[int, list[int]] = {}
    for e, col in enumerate(cols):
        if col == c or col == c_prime:
            u, w = graph.edges[e]
            inc.setdefault(u, []).append(e)
            inc.setdefault(w, []).append(e)
    for v, es in inc.items():
        if len(es) > 2:
            raise ContractError(f"vertex {v} has {len(es)} edges colored {c} or {c_prime}")
    seen: set[int] = set()
    comps: list[Component] = []
    position: dict[int, tuple[int, int]] = {}
    for v in sorted(inc):
        if v in seen:
            continue
        # collect the component
        stack, members = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            members.append(x)
            for e in inc[x]:
                y = graph.other(e, x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        ends = sorted(x for x in members if len(inc[x]) == 1)
        if ends:
            start, prev_edge = ends[0], None
            verts, edges = [start], []
            x = start
            while True:
                nxt = [e for e in inc[x] if e != prev_edge]
                if not nxt:
                    break
                e = nxt[0]
                edges.append(e)
                x = graph.other(e, x)
                verts.append(x)
                prev_edge = e
            comp = Component("path", tuple(verts), tuple(edges))
        else:
            start = min(members)
            e0 = min(inc[start], key=lambda e: graph.other(e, start))
            verts, edges = [start], [e0]
            x = graph.other(e0, start)
            prev_edge = e0
            while x != start:
                verts.append(x)
                e = next(f for f in inc[x] if f != prev_edge)
                edges.append(e)
                x = graph.other(e, x)
                prev_edge = e
            comp = Component("cycle", tuple(verts), tuple(edges))
        idx = len(comps)
        comps.append(comp)
        for p, e in enumerate(comp.edges):
            position[e] = (idx, p)
    return TwoColorSubgraph((c, c_prime), tuple(comps), position)


# -- single subpath menu -----------------------------------------------------


@dataclass(frozen=True)
class SubPathChoice:
    component: int
    start: int  # vertex positions within the component
    end: int
    arc: int  # 0: forward from start to end, 1: the other way round a cycle, -1: full cycle
    edges: tuple[int, ...]
    ends: tuple[int, int] | None  # end vertex ids, None for a full cycle


MENU_MODES = ("all", "three", "cycles", "even")


def _block_entries(comp: Component, mode: str) -> list[tuple[int, int, int]]:
    m = comp.n
    out = []
    if comp.kind == "path":
        if mode in ("cycles", "even"):
            return out
        for i in range(m):
            for j in range(i + 1, m):
                if mode == "three" and i == 0 and j == m - 1:
                    continue
                out.append((i, j, 0))
        return out
    for i in range(m):
        for j in range(i + 1, m):
            if mode == "even" and (j - i) % 2:
                continue
            out.append((i, j, 0))
            out.append((i, j, 1))
    if mode != "even":
        out.append((0, 0, -1))
    return out


def _block_count(comp: Component, mode: str) -> int:
    m = comp.n
    if comp.kind == "path":
        if mode in ("cycles", "even"):
            return 0
        return comb(m, 2) - (1 if mode == "three" else 0)
    if mode == "even":
        return 2 * sum(m - d for d in range(2, m - 1, 2))
    return 2 * comb(m, 2) + 1


class SubpathMenu:
    """Uniformly indexable list of single subpaths (and full cycles) of H.

    ``mode`` selects the variant: ``all`` every subpath plus every full
    cycle; ``three`` drops full path components (an end must be interior);
    ``cycles`` keeps only cycle components; ``even`` keeps even-length arcs of
    cycle components.
    """

    def __init__(self, H: TwoColorSubgraph, mode: str = "all"):
        if mode not in MENU_MODES:
            raise ValueError(f"unknown menu mode {mode!r}")
        self.H = H
        self.mode = mode
        self._counts = [_block_count(comp, mode) for comp in H.components]
        self._prefix = list(accumulate(self._counts, initial=0))
        self.count = self._prefix[-1]

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, idx: int) -> SubPathChoice:
        if not 0 <= idx < self.count:
            raise IndexError(idx)
        b = bisect_right(self._prefix, idx) - 1
        comp = self.H.components[b]
        i, j, arc = _block_entries(comp, self.mode)[idx - self._prefix[b]]
        return _make_choice(b, comp, i, j, arc)

    def __iter__(self):
        for b, comp in enumerate(self.H.components):
            for i, j, arc in _block_entries(comp, self.mode):
                yield _make_choice(b, comp, i, j, arc)

    def lookup(self, edge_set: Iterable[int]) -> list[int]:
        """Indices of entries whose edge set equals ``edge_set``."""
        key = _describe_run(self.H, edge_set)
        if key is None:
            return []
        b, i, j, arc = key
        try:
            local = _block_entries(self.H.components[b], self.mode).index((i, j, arc))
        except ValueError:
            return []
        return [self._prefix[b] + local]


def _make_choice(b: int, comp: Component, i: int, j: int, arc: int) -> SubPathChoice:
    if arc == -1:
        return SubPathChoice(b, 0, 0, -1, comp.edges, None)
    if arc == 0:
        edges = comp.edges[i:j]
    else:
        edges = comp.edges[j:] + comp.edges[:i]
    return SubPathChoice(b, i, j, arc, edges, (comp.vertices[i], comp.vertices[j]))


def _describe_run(H: TwoColorSubgraph, edge_set: Iterable[int]):
    """(component, i, j, arc) of a single connected run of H edges, else None."""
    es = set(edge_set)
    if not es:
        return None
    try:
        locs = [H.position[e] for e in es]
    except KeyError:
        return None
    b = locs[0][0]
    if any(x[0] != b for x in locs):
        return None
    comp = H.components[b]
    pos = {p for _, p in locs}
    L = len(pos)
    if comp.kind == "path":
        lo, hi = min(pos), max(pos)
        if hi - lo + 1 != L:
            return None
        return (b, lo, hi + 1, 0)
    m = comp.n
    if L == m:
        return (b, 0, 0, -1)
    starts = [p for p in pos if (p - 1) % m not in pos]
    if len(starts) != 1:
        return None
    a = starts[0]
    z = (a + L) % m
    if a < z:
        return (b, a, z, 0)
    return (b, z, a, 1)


# -- anchored pair menu ------------------------------------------------------


@dataclass(frozen=True)
class AnchoredSub:
    component: int
    side: int  # 0: anchored at the first vertex, 1: at the last vertex
    t: int  # position of the interior end vertex
    edges: tuple[int, ...]


class AnchoredPairMenu:
    """Unordered pairs of edge-disjoint anchored subpaths of H's path components.

    An anchored subpath runs from an end vertex of a path component of H to an
    interior vertex of it.  With ``shared_interior=False`` the two subpaths of
    a pair may not meet at the same interior vertex (that pair flips a whole
    path component and creates no deficiency).
    """

    def __init__(self, H: TwoColorSubgraph, shared_interior: bool = True):
        self.H = H
        self.shared = shared_interior
        self.subs: list[AnchoredSub] = []
        self._comp_sizes: list[int] = []
        self._comp_first: dict[int, int] = {}
        for b, comp in enumerate(H.components):
            if comp.kind != "path" or comp.n < 3:
                continue
            self._comp_first[b] = len(self.subs)
            q = comp.n - 2
            for t in range(1, q + 1):
                self.subs.append(AnchoredSub(b, 0, t, comp.edges[:t]))
            for t in range(1, q + 1):
                self.subs.append(AnchoredSub(b, 1, t, comp.edges[t:]))
        self._later = []  # number of anchored subpaths in later components, per sub
        total = len(self.subs)
        for s in self.subs:
            comp = H.components[s.component]
            first = self._comp_first[s.component]
            self._later.append(total - (first + 2 * (comp.n - 2)))
        self._partners = [self._partner_count(i) for i in range(total)]
        self._prefix = list(accumulate(self._partners, initial=0))
        self.count = self._prefix[-1]

    def __len__(self) -> int:
        return self.count

    def _same_comp_partners(self, i: int) -> list[int]:
        s = self.subs[i]
        if s.side == 1:
            return []
        q = self.H.components[s.component].n - 2
        first = self._comp_first[s.component]
        lo = s.t if self.shared else s.t + 1
        return [first + q + (t2 - 1) for t2 in range(lo, q + 1)]

    def _partner_count(self, i: int) -> int:
        return len(self._same_comp_partners(i)) + self._later[i]

    def __getitem__(self, idx: int) -> tuple[AnchoredSub, AnchoredSub]:
        if not 0 <= idx < self.count:
            raise IndexError(idx)
        i = bisect_right(self._prefix, idx) - 1
        r = idx - self._prefix[i]
        same = self._same_comp_partners(i)
        if r < len(same):
            j = same[r]
        else:
            j = len(self.subs) - self._later[i] + (r - len(same))
        return self.subs[i], self.subs[j]

    def __iter__(self):
        for idx in range(self.count):
            yield self[idx]

    def _index_of(self, i: int, j: int) -> int | None:
        if i > j:
            i, j = j, i
        same = self._same_comp_partners(i)
        if j in same:
            return self._prefix[i] + same.index(j)
        later_start = len(self.subs) - self._later[i]
        if j >= later_start:
            return self._prefix[i] + len(same) + (j - later_start)
        return None

    def lookup(self, edge_set: Iterable[int]) -> list[int]:
        """Indices of pairs whose union of edges equals ``edge_set``."""
        es = set(edge_set)
        if not es or not self.subs:
            return []
        by_comp: dict[int, set[int]] = {}
        for e in es:
            loc = self.H.position.get(e)
            if loc is None:
                return []
            by_comp.setdefault(loc[0], set()).add(loc[1])
        if any(b not in self._comp_first for b in by_comp):
            return []
        out = []
        if len(by_comp) == 1:
            (b, pos), = by_comp.items()
            comp = self.H.components[b]
            q = comp.n - 2
            first = self._comp_first[b]
            ne = comp.n - 1
            if len(pos) == ne:
                if self.shared:
                    for t in range(1, q + 1):
                        out.append(self._index_of(first + t - 1, first + q + t - 1))
                return out
            # a left piece [0, t1) and a right piece [t2, ne) with t1 < t2
            if 0 not in pos or ne - 1 not in pos:
                return []
            t1 = next(p for p in range(ne) if p not in pos)
            t2 = max(p for p in range(ne) if p not in pos) + 1
            if any(p in pos for p in range(t1, t2)) or not (1 <= t1 < t2 <= q):
                return []
            out.append(self._index_of(first + t1 - 1, first + q + t2 - 1))
            return [x for x in out if x is not None]
        if len(by_comp) != 2:
            return []
        picks = []
        for b, pos in by_comp.items():
            comp = self.H.components[b]
            q, ne, first = comp.n - 2, comp.n - 1, self._comp_first[b]
            lo, hi = min(pos), max(pos)
            if hi - lo + 1 != len(pos):
                return []
            if lo == 0 and hi < ne - 1:
                picks.append(first + hi)  # left piece ending at vertex hi + 1
            elif hi == ne - 1 and lo > 0:
                picks.append(first + q + lo - 1)
            else:
                return []
        idx = self._index_of(*picks)
        return [] if idx is None else [idx]


def anchored_pair_edges(pair: tuple[AnchoredSub, AnchoredSub]) -> tuple[int, ...]:
    return pair[0].edges + pair[1].edges


def subpath_menu(H: TwoColorSubgraph, mode: str = "all") -> SubpathMenu:
    return SubpathMenu(H, mode)


def anchored_pair_menu(H: TwoColorSubgraph, shared_interior: bool = True) -> AnchoredPairMenu:
    return AnchoredPairMenu(H, shared_interior)
