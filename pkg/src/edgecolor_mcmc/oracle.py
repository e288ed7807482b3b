"""Brute-force ground truth for small instances.

``enumerate_colorings`` lists every proper edge k-coloring by depth-first
search over edges in index order.  Colors are tried in increasing order, so the
output is already lexicographic in (edge index -> color).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import BipartiteGraph, Coloring, InputError

MAX_EDGES = 24


@dataclass(frozen=True)
class SolutionSet:
    """Canonically ordered proper colorings of one (graph, k).

    ``overflowed`` is set when the search hit ``limit``; the listed colorings
    are then only the first ``limit`` and ``count`` refuses to answer.
    """

    graph: BipartiteGraph
    k: int
    colorings: tuple[Coloring, ...]
    overflowed: bool = False
    limit: int | None = None

    @property
    def count(self) -> int:
        if self.overflowed:
            raise OverflowError(f"more than {self.limit} colorings; the enumeration was cut off")
        return len(self.colorings)

    def __len__(self) -> int:
        return self.count

    def __iter__(self):
        return iter(self.colorings)

    def __getitem__(self, i: int) -> Coloring:
        return self.colorings[i]

    def index_map(self) -> dict[tuple[int, ...], int]:
        return {c.colors: i for i, c in enumerate(self.colorings)}

    def histogram(self, samples: Iterable[Coloring]) -> list[int]:
        """Counts of ``samples`` in canonical order; a non-member raises."""
        idx = self.index_map()
        counts = [0] * len(self.colorings)
        for s in samples:
            i = idx.get(s.colors)
            if i is None:
                raise InputError(f"sample {s.key()} is not a proper coloring of this instance")
            counts[i] += 1
        return counts

    def export(self) -> str:
        return "".join(c.key() + "\n" for c in self.colorings)


def enumerate_colorings(graph: BipartiteGraph, k: int, limit: int | None = None,
                        force: bool = False) -> SolutionSet:
    if k < 0:
        raise InputError("k must be non-negative")
    if graph.n_edges > MAX_EDGES and not force:
        raise InputError(f"graph has {graph.n_edges} edges; enumeration above {MAX_EDGES} needs an explicit override")
    m = graph.n_edges
    ends = graph.edges
    # earlier edges sharing a vertex with edge e
    earlier = [
        tuple(f for f in graph.adjacency[u] + graph.adjacency[w] if f < e)
        for e, (u, w) in enumerate(ends)
    ]
    cols = [0] * m
    out: list[Coloring] = []
    overflow = False

    def dfs(e: int) -> bool:
        nonlocal overflow
        if e == m:
            if limit is not None and len(out) >= limit:
                overflow = True
                return False
            out.append(Coloring(tuple(cols), k))
            return True
        used = {cols[f] for f in earlier[e]}
        for c in range(k):
            if c in used:
                continue
            cols[e] = c
            if not dfs(e + 1):
                return False
        return True

    dfs(0)
    return SolutionSet(graph, k, tuple(out), overflow, limit)


def _shares(counts: Sequence[int | float]) -> tuple[float, int]:
    if any(c < 0 for c in counts):
        raise InputError("histogram has a negative entry")
    total = sum(counts)
    if not counts or total <= 0:
        raise InputError("histogram has no mass")
    return total, len(counts)


def tvd(counts: Sequence[int | float]) -> float:
    """Total variation distance between the normalised histogram and uniform."""
    total, n = _shares(counts)
    if all(isinstance(c, int) for c in counts):
        exact = sum(abs(Fraction(c, total) - Fraction(1, n)) for c in counts) / 2
        return float(exact)
    return 0.5 * sum(abs(c / total - 1 / n) for c in counts)


def chi_square(counts: Sequence[int | float]) -> float:
    """Pearson statistic against the uniform expectation; ``len(counts) - 1`` degrees of freedom."""
    total, n = _shares(counts)
    expected = total / n
    return sum((c - expected) ** 2 for c in counts) / expected
