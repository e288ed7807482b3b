import itertools
import sys
import random

from hypothesis import strategies as st

from edgecolor_mcmc import BipartiteGraph, Coloring, initial_coloring
from edgecolor_mcmc.coloring import is_proper


def k33() -> BipartiteGraph:
    return BipartiteGraph.complete(3, 3)


def cube() -> BipartiteGraph:
    """The 3-cube; left = even-weight bit strings."""
    even = [v for v in range(8) if bin(v).count("1") % 2 == 0]
    odd = [v for v in range(8) if bin(v).count("1") % 2 == 1]
    return BipartiteGraph.from_pairs(
        4, 4, [(even.index(u), odd.index(u ^ (1 << b))) for u in even for b in range(3)]
    )


def brute_colorings(graph: BipartiteGraph, k: int) -> list[tuple[int, ...]]:
    """Proper k-colorings by trying every color vector."""
    return [
        cols for cols in itertools.product(range(k), repeat=graph.n_edges)
        if is_proper(graph, cols)
    ]


def random_graph(rnd: random.Random, max_side: int = 5, p: float = 0.5) -> BipartiteGraph:
    a, b = rnd.randint(1, max_side), rnd.randint(1, max_side)
    pairs = [(u, w) for u in range(a) for w in range(b) if rnd.random() < p]
    if not pairs:
        pairs = [(0, 0)]
    return BipartiteGraph.from_pairs(a, b, pairs)


def scramble(graph: BipartiteGraph, col: Coloring, rnd: random.Random, rounds: int = 20) -> Coloring:
    """Random proper coloring reachable by Kempe swaps from ``col``."""
    from edgecolor_mcmc.coloring import alternating_walk, flip

    cols = col.colors
    k = col.k
    for _ in range(rounds):
        if not cols or k < 2:
            break
        e = rnd.randrange(len(cols))
        a = cols[e]
        b = rnd.choice([c for c in range(k) if c != a])
        u = graph.edges[e][0]
        left, _ = alternating_walk(graph, cols, u, e, a, b)
        path = set(left)
        back = [f for f in graph.adjacency[u] if cols[f] == b]
        if back:
            more, _ = alternating_walk(graph, cols, u, back[0], b, a)
            path |= set(more)
        cols = flip(cols, path, a, b)
    assert is_proper(graph, cols)
    return Coloring(cols, k)


@st.composite
def colored_graphs(draw, max_side: int = 4, max_extra: int = 1, min_k: int = 1):
    """(graph, proper coloring) with k between max degree and max degree + max_extra."""
    a = draw(st.integers(1, max_side))
    b = draw(st.integers(1, max_side))
    cells = [(u, w) for u in range(a) for w in range(b)]
    chosen = draw(st.lists(st.sampled_from(cells), min_size=1, max_size=len(cells), unique=True))
    graph = BipartiteGraph.from_pairs(a, b, sorted(chosen))
    k = max(min_k, graph.max_degree) + draw(st.integers(0, max_extra))
    seed = draw(st.integers(0, 2**32 - 1))
    col = scramble(graph, initial_coloring(graph, k), random.Random(seed))
    return graph, col


# Cube instance reproducing the five-move worked example: red = 2, blue = 0,
# green = 1; N is the 4-cycle e1 e2 e3 e4 = edges 0, 2, 6, 8 starting at vertex 4.
EXAMPLE_COLORS = (0, 1, 2, 0, 1, 2, 1, 0, 2, 1, 0, 2)
EXAMPLE_CYCLE = (0, 2, 6, 8)
EXAMPLE_RED = 2


def worked_example():
    return cube(), Coloring(EXAMPLE_COLORS, 3), EXAMPLE_CYCLE, EXAMPLE_RED


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
