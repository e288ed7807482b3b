"""Latin rectangles and their completions as edge colorings.

An r x n Latin rectangle R with k = n - r missing rows gives a k-regular
bipartite graph: left vertex A_i per symbol i, right vertex B_j per column j,
and an edge A_i B_j whenever symbol i is absent from column j.  Giving that
edge color l means writing i into cell (r + l, j), so proper k-colorings and
completions of R are the same objects.

Symbols are 0-based in memory and 1-based in files.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .coloring import ContractError, initial_coloring, is_proper
from .graph import BipartiteGraph, Coloring, InputError
from .metropolis import run_chain


@dataclass(frozen=True)
class LatinRectangle:
    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.n
        if n < 1:
            raise InputError("order n must be positive")
        if len(self.rows) > n:
            raise InputError(f"{len(self.rows)} rows exceed the order {n}")
        full = set(range(n))
        for r, row in enumerate(self.rows):
            if len(row) != n or set(row) != full:
                raise InputError(f"row {r + 1} is not a permutation of 1..{n}")
        for j in range(n):
            col = [row[j] for row in self.rows]
            if len(set(col)) != len(col):
                raise InputError(f"column {j + 1} repeats a symbol")

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def k(self) -> int:
        """Number of rows still to fill."""
        return self.n - self.r

    @classmethod
    def from_lists(cls, rows, n: int | None = None, one_based: bool = True) -> LatinRectangle:
        rows = [tuple(x - 1 if one_based else x for x in row) for row in rows]
        if n is None:
            if not rows:
                raise InputError("order n is needed for an empty rectangle")
            n = len(rows[0])
        return cls(n, tuple(rows))


@dataclass(frozen=True)
class LatinSquare(LatinRectangle):
    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.rows) != self.n:
            raise InputError(f"a Latin square of order {self.n} needs {self.n} rows, got {len(self.rows)}")


def parse_latin(text: str) -> LatinRectangle:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputError("empty rectangle file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "latin":
        raise InputError("first line must be 'latin <n> <r>'")
    try:
        n, r = int(head[1]), int(head[2])
    except ValueError:
        raise InputError("non-integer order or row count") from None
    if n < 1 or not 0 <= r <= n:
        raise InputError(f"need n >= 1 and 0 <= r <= n, got n={n} r={r}")
    body = lines[1:]
    if len(body) != r:
        raise InputError(f"header announces {r} rows, found {len(body)}")
    rows = []
    for i, ln in enumerate(body, 1):
        try:
            vals = [int(x) for x in ln.split()]
        except ValueError:
            raise InputError(f"row {i}: non-integer entry") from None
        if len(vals) != n:
            raise InputError(f"row {i}: expected {n} entries, found {len(vals)}")
        bad = [x for x in vals if not 1 <= x <= n]
        if bad:
            raise InputError(f"row {i}: symbol {bad[0]} outside 1..{n}")
        rows.append(tuple(x - 1 for x in vals))
    cls = LatinSquare if r == n else LatinRectangle
    return cls(n, tuple(rows))


def format_latin(R: LatinRectangle) -> str:
    lines = [f"latin {R.n} {R.r}"]
    lines += [" ".join(str(x + 1) for x in row) for row in R.rows]
    return "\n".join(lines) + "\n"


def read_latin(path: str | Path) -> LatinRectangle:
    return parse_latin(Path(path).read_text())


@dataclass(frozen=True)
class CellIndex:
    """Edge id -> (symbol, column) for the graph of a rectangle."""

    cells: tuple[tuple[int, int], ...]
    first_row: int

    def edge_of(self) -> dict[tuple[int, int], int]:
        return {cell: e for e, cell in enumerate(self.cells)}


def rectangle_to_graph(R: LatinRectangle) -> tuple[BipartiteGraph, CellIndex]:
    n = R.n
    present = [{row[j] for row in R.rows} for j in range(n)]
    cells = tuple((i, j) for i in range(n) for j in range(n) if i not in present[j])
    graph = BipartiteGraph.from_pairs(n, n, cells)
    k = R.k
    bad = [v for v in graph.vertices if graph.degree(v) != k]
    if bad:
        raise ContractError(f"derived graph is not {k}-regular at vertices {bad}")
    return graph, CellIndex(cells, R.r)


def coloring_to_completion(R: LatinRectangle, graph: BipartiteGraph, index: CellIndex,
                           coloring: Coloring) -> LatinSquare:
    if len(coloring) != graph.n_edges or not is_proper(graph, coloring.colors):
        raise ContractError("coloring is not a proper coloring of the rectangle's graph")
    if coloring.k != R.k:
        raise ContractError(f"coloring uses k={coloring.k}, rectangle needs k={R.k}")
    grid = [list(row) for row in R.rows] + [[-1] * R.n for _ in range(R.k)]
    for e, (i, j) in enumerate(index.cells):
        grid[index.first_row + coloring.colors[e]][j] = i
    return LatinSquare(R.n, tuple(tuple(row) for row in grid))


def completion_to_coloring(R: LatinRectangle, index: CellIndex, square: LatinSquare) -> Coloring:
    if square.rows[: R.r] != R.rows:
        raise ContractError("square does not extend the rectangle")
    edge = index.edge_of()
    cols = [-1] * len(index.cells)
    for l in range(R.k):
        for j, i in enumerate(square.rows[R.r + l]):
            cols[edge[(i, j)]] = l
    return Coloring(tuple(cols), R.k)


def completions(R: LatinRectangle) -> list[LatinSquare]:
    """All completions by direct row-by-row search (independent of the graph view)."""
    n = R.n
    used = [{row[j] for row in R.rows} for j in range(n)]
    out: list[LatinSquare] = []
    rows = list(R.rows)

    def fill_row(row: list[int], j: int, taken: set[int]) -> None:
        if j == n:
            rows.append(tuple(row))
            for s, sym in enumerate(row):
                used[s].add(sym)
            next_row()
            for s, sym in enumerate(row):
                used[s].discard(sym)
            rows.pop()
            return
        for sym in range(n):
            if sym not in taken and sym not in used[j]:
                row.append(sym)
                taken.add(sym)
                fill_row(row, j + 1, taken)
                taken.discard(sym)
                row.pop()

    def next_row() -> None:
        if len(rows) == n:
            out.append(LatinSquare(n, tuple(rows)))
            return
        fill_row([], 0, set())

    next_row()
    return out


def sample_completion(R: LatinRectangle, steps: int, rng: random.Random,
                      kernel: str = "regular") -> LatinSquare:
    """Run the chain on the rectangle's graph for ``steps`` steps and read off the square."""
    graph, index = rectangle_to_graph(R)
    start = initial_coloring(graph, R.k)
    if R.k == 0 or steps == 0:
        return coloring_to_completion(R, graph, index, start)
    samples, _ = run_chain(graph, R.k, start, steps, steps, rng, kernel=kernel)
    return coloring_to_completion(R, graph, index, samples[-1])
