import itertools

from hypothesis import given, settings

from edgecolor_mcmc import BipartiteGraph, anchored_pair_menu, subpath_menu, two_color_subgraph

from conftest import colored_graphs


def cycle_graph(n_half):
    """A single cycle on 2 * n_half vertices colored 0/1 alternately."""
    pairs = [(i, i) for i in range(n_half)] + [(i, (i + 1) % n_half) for i in range(n_half)]
    g = BipartiteGraph.from_pairs(n_half, n_half, pairs)
    cols = tuple([0] * n_half + [1] * n_half)
    return g, cols


def path_graph(m):
    """A path with m edges colored 0/1 alternately."""
    pairs = [((i + 1) // 2, i // 2) for i in range(m)]
    g = BipartiteGraph.from_pairs((m + 2) // 2, (m + 1) // 2, pairs)
    return g, tuple(i % 2 for i in range(m))


def test_eight_cycle_menu_has_57_entries():
    g, cols = cycle_graph(4)
    H = two_color_subgraph(g, cols, 0, 1)
    assert [c.kind for c in H.components] == ["cycle"]
    assert len(subpath_menu(H, "all")) == 57


def test_two_four_cycles_give_26():
    g1, c1 = cycle_graph(2)
    pairs = [(u, w - 2) for u, w in g1.edges] + [(u + 2, w) for u, w in g1.edges]
    g = BipartiteGraph.from_pairs(4, 4, pairs)
    H = two_color_subgraph(g, c1 + c1, 0, 1)
    assert len(H.components) == 2
    assert len(subpath_menu(H, "all")) == 26


def test_path_menu_counts():
    g, cols = path_graph(4)
    H = two_color_subgraph(g, cols, 0, 1)
    assert [c.kind for c in H.components] == ["path"]
    # five vertices: any two of them bound a subpath
    assert len(subpath_menu(H, "all")) == 10
    # drops the full path
    assert len(subpath_menu(H, "three")) == 9


def test_anchored_pairs_on_a_path():
    g, cols = path_graph(4)
    H = two_color_subgraph(g, cols, 0, 1)
    menu = anchored_pair_menu(H)
    entries = [frozenset(e for s in pair for e in s.edges) for pair in menu]
    assert len(entries) == len(menu)
    for pair in menu:
        a, b = pair
        assert not set(a.edges) & set(b.edges)


@settings(max_examples=80, deadline=None)
@given(colored_graphs(max_side=4, max_extra=1, min_k=2))
def test_components_partition_the_two_color_edges(gc):
    graph, col = gc
    for c, cp in itertools.combinations(range(col.k), 2):
        H = two_color_subgraph(graph, col.colors, c, cp)
        seen = [e for comp in H.components for e in comp.edges]
        assert sorted(seen) == sorted(e for e, x in enumerate(col.colors) if x in (c, cp))
        for comp in H.components:
            want = len(comp.vertices) if comp.kind == "cycle" else len(comp.vertices) - 1
            assert len(comp.edges) == want


@settings(max_examples=60, deadline=None)
@given(colored_graphs(max_side=4, max_extra=1, min_k=2))
def test_menu_lookup_inverts_indexing(gc):
    graph, col = gc
    H = two_color_subgraph(graph, col.colors, 0, 1)
    for mode in ("all", "three"):
        menu = subpath_menu(H, mode)
        for i, choice in enumerate(menu):
            assert menu.lookup(choice.edges) == [i]
