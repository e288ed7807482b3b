"""Bipartite graphs, edge colorings and their text file formats.

Vertex ids are integers.  Left vertices are ``0 .. n_left - 1`` and right
vertices are ``n_left .. n_left + n_right - 1``; the order of ids is the
canonical vertex order used everywhere else in the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


class InputError(ValueError):
    """Malformed or infeasible user input (CLI exit code 2)."""


@dataclass(frozen=True)
class BipartiteGraph:
    n_left: int
    n_right: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.n_left + self.n_right
        adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for i, (u, w) in enumerate(self.edges):
            if not (0 <= u < self.n_left and self.n_left <= w < n):
                raise InputError(f"edge {i} = ({u}, {w}) does not join a left and a right vertex")
            if (u, w) in seen:
                raise InputError(f"duplicate edge ({u}, {w})")
            seen.add((u, w))
            adj[u].append(i)
            adj[w].append(i)
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))

    @classmethod
    def from_pairs(cls, n_left: int, n_right: int, pairs: Iterable[tuple[int, int]]) -> BipartiteGraph:
        """Build from (left index, right index) pairs, both 0-based within their class."""
        return cls(n_left, n_right, tuple((u, n_left + w) for u, w in pairs))

    @classmethod
    def complete(cls, n_left: int, n_right: int) -> BipartiteGraph:
        return cls.from_pairs(n_left, n_right, [(u, w) for u in range(n_left) for w in range(n_right)])

    @property
    def n_vertices(self) -> int:
        return self.n_left + self.n_right

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @property
    def left_vertices(self) -> range:
        return range(self.n_left)

    @property
    def right_vertices(self) -> range:
        return range(self.n_left, self.n_vertices)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def other(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        return w if v == u else u

    def is_left(self, v: int) -> bool:
        return v < self.n_left

    def active_vertex_count(self) -> int:
        """Number of non-isolated vertices."""
        return sum(1 for a in self.adjacency if a)


@dataclass(frozen=True)
class Coloring:
    """A total map edge id -> color index in ``[0, k)``; not necessarily proper."""

    colors: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        for e, c in enumerate(self.colors):
            if not 0 <= c < self.k:
                raise InputError(f"edge {e} has color {c} outside [0, {self.k})")

    def __getitem__(self, e: int) -> int:
        return self.colors[e]

    def __len__(self) -> int:
        return len(self.colors)

    def recolored(self, changes: dict[int, int]) -> Coloring:
        cols = list(self.colors)
        for e, c in changes.items():
            cols[e] = c
        return Coloring(tuple(cols), self.k)

    def key(self) -> str:
        """Color string used for hashing and histogram indexing."""
        if self.k <= 10:
            return "".join(map(str, self.colors))
        return ",".join(map(str, self.colors))

    def relabeled(self, perm: Sequence[int]) -> Coloring:
        return Coloring(tuple(perm[c] for c in self.colors), self.k)


def check_coloring(graph: BipartiteGraph, coloring: Coloring) -> None:
    if len(coloring.colors) != graph.n_edges:
        raise InputError(
            f"coloring has {len(coloring.colors)} entries but the graph has {graph.n_edges} edges"
        )


# -- file formats ------------------------------------------------------------


def parse_graph(text: str) -> BipartiteGraph:
    header = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None or len(parts) != 5 or parts[1] != "bipartite":
                raise InputError(f"line {lineno}: expected 'p bipartite <|U|> <|W|> <|E|>'")
            try:
                header = tuple(int(x) for x in parts[2:])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer header field") from None
        elif parts[0] == "e":
            if header is None:
                raise InputError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise InputError(f"line {lineno}: expected 'e u w'")
            try:
                u, w = int(parts[1]), int(parts[2])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer vertex id") from None
            if not (1 <= u <= header[0] and 1 <= w <= header[1]):
                raise InputError(f"line {lineno}: vertex id out of range")
            pairs.append((u - 1, w - 1))
        else:
            raise InputError(f"line {lineno}: unknown record {parts[0]!r}")
    if header is None:
        raise InputError("missing 'p bipartite' header")
    if len(pairs) != header[2]:
        raise InputError(f"header announces {header[2]} edges, found {len(pairs)}")
    return BipartiteGraph.from_pairs(header[0], header[1], pairs)


def format_graph(graph: BipartiteGraph) -> str:
    lines = [f"p bipartite {graph.n_left} {graph.n_right} {graph.n_edges}"]
    lines += [f"e {u + 1} {w - graph.n_left + 1}" for u, w in graph.edges]
    return "\n".join(lines) + "\n"


def parse_coloring(text: str, graph: BipartiteGraph, k: int) -> Coloring:
    colors: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "c" or len(parts) != 3:
            raise InputError(f"line {lineno}: expected 'c <edge-index> <color-index>'")
        try:
            e, c = int(parts[1]), int(parts[2])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer field") from None
        if not 0 <= e < graph.n_edges:
            raise InputError(f"line {lineno}: unknown edge index {e}")
        if e in colors:
            raise InputError(f"line {lineno}: edge {e} colored twice")
        colors[e] = c
    missing = [e for e in range(graph.n_edges) if e not in colors]
    if missing:
        raise InputError(f"coloring misses edges {missing[:5]}")
    return Coloring(tuple(colors[e] for e in range(graph.n_edges)), k)


def format_coloring(coloring: Coloring) -> str:
    return "".join(f"c {e} {c}\n" for e, c in enumerate(coloring.colors))


def read_graph(path: str | Path) -> BipartiteGraph:
    return parse_graph(Path(path).read_text())


def read_coloring(path: str | Path, graph: BipartiteGraph, k: int) -> Coloring:
    return parse_coloring(Path(path).read_text(), graph, k)
