import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgecolor_mcmc import InputError, LatinRectangle, LatinSquare, enumerate_colorings, rectangle_to_graph
from edgecolor_mcmc.latin import (
    completion_to_coloring,
    coloring_to_completion,
    completions,
    format_latin,
    parse_latin,
    sample_completion,
)
from edgecolor_mcmc.rng import make_rng


def test_parse_and_format():
    text = "latin 3 2\n1 2 3\n2 3 1\n"
    R = parse_latin(text)
    assert R.rows == ((0, 1, 2), (1, 2, 0))
    assert (R.r, R.k) == (2, 1)
    assert format_latin(R) == text
    assert isinstance(parse_latin("latin 1 1\n1\n"), LatinSquare)


@pytest.mark.parametrize("text, fragment", [
    ("latin 3 1\n1 2 2\n", "row 1"),
    ("latin 3 2\n1 2 3\n1 3 2\n", "column 1"),
    ("latin 3 1\n1 2 4\n", "outside"),
    ("latin 3 2\n1 2 3\n", "announces 2"),
    ("square 3 0\n", "first line"),
])
def test_bad_rectangles(text, fragment):
    with pytest.raises(InputError, match=fragment):
        parse_latin(text)


def test_square_needs_all_rows():
    with pytest.raises(InputError):
        LatinSquare(3, ((0, 1, 2),))


def test_graph_is_regular_with_k_colors():
    R = LatinRectangle.from_lists([[1, 2, 3, 4]])
    g, idx = rectangle_to_graph(R)
    assert g.n_edges == 12 and g.max_degree == 3
    assert len(idx.edge_of()) == 12


def test_empty_rectangles_give_latin_square_counts():
    assert len(completions(LatinRectangle(3, ()))) == 12
    assert len(completions(LatinRectangle(4, ()))) == 576
    g, _ = rectangle_to_graph(LatinRectangle(3, ()))
    assert enumerate_colorings(g, 3).count == 12


def test_forced_last_row():
    R = LatinRectangle.from_lists([[1, 2, 3], [2, 3, 1]])
    sq = sample_completion(R, 20, make_rng(1))
    assert sq.rows[2] == (2, 0, 1)


def test_bijection_round_trip_order_three():
    R = LatinRectangle.from_lists([[2, 3, 1]])
    g, idx = rectangle_to_graph(R)
    squares = {coloring_to_completion(R, g, idx, c) for c in enumerate_colorings(g, R.k)}
    assert squares == set(completions(R))
    for sq in squares:
        col = completion_to_coloring(R, idx, sq)
        assert coloring_to_completion(R, g, idx, col) == sq


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(4)), st.integers(0, 10**6))
def test_sampled_completion_extends_its_rectangle(row, seed):
    R = LatinRectangle(4, (tuple(row),))
    sq = sample_completion(R, 30, random.Random(seed))
    assert sq.rows[0] == tuple(row)
    for j in range(4):
        assert sorted(r[j] for r in sq.rows) == [0, 1, 2, 3]


def test_counts_agree_for_all_order_three_rectangles():
    for r in range(4):
        for rows in itertools.permutations(itertools.permutations(range(3)), r):
            try:
                R = LatinRectangle(3, rows)
            except InputError:
                continue
            g, _ = rectangle_to_graph(R)
            assert len(completions(R)) == enumerate_colorings(g, R.k).count


def test_two_rows_of_three_give_a_perfect_matching():
    R = LatinRectangle.from_lists([[1, 2, 3], [2, 3, 1]])
    g, idx = rectangle_to_graph(R)
    assert R.k == 1 and g.n_edges == 3 and g.max_degree == 1
    # column j misses exactly the one symbol not in its first two cells
    assert sorted(idx.cells) == [(0, 1), (1, 2), (2, 0)]


def test_order_one():
    R = LatinRectangle(1, ())
    assert sample_completion(R, 5, make_rng(0)).rows == ((0,),)


def test_all_order_three_squares_round_trip():
    R = LatinRectangle(3, ())
    g, idx = rectangle_to_graph(R)
    sols = enumerate_colorings(g, 3)
    squares = [coloring_to_completion(R, g, idx, c) for c in sols]
    assert len(set(squares)) == 12
    for c, sq in zip(sols, squares):
        assert completion_to_coloring(R, idx, sq) == c


def _visited_squares(n, steps, thin, seed):
    from edgecolor_mcmc import initial_coloring, run_chain

    R = LatinRectangle(n, ())
    g, idx = rectangle_to_graph(R)
    samples, _ = run_chain(g, n, initial_coloring(g, n), steps, thin, make_rng(seed), kernel="regular")
    return [coloring_to_completion(R, g, idx, s) for s in samples[1:]]


def test_order_three_long_run_is_close_to_uniform():
    from collections import Counter

    from edgecolor_mcmc import tvd

    squares = _visited_squares(3, 50_000, 10, seed=21)
    counts = Counter(squares)
    assert len(counts) == 12
    assert tvd(list(counts.values())) < 0.05


@pytest.mark.slow
def test_order_four_coverage():
    steps, thin = 10**6, 100
    seen = set(_visited_squares(4, steps, thin, seed=5))
    m = steps // thin
    expected = 576 * (1 - (1 - 1 / 576) ** m)
    assert expected > 575
    assert len(seen) >= 550
