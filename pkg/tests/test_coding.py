import pytest
from hypothesis import given, strategies as st

from posfunctor.coding import (
    cantor_pair,
    cantor_unpair,
    decode_graph,
    dual,
    graph_codes,
    join,
    project,
    split,
    tuple_decode,
    tuple_encode,
)
from posfunctor.errors import CodingError


def dovetail(n):
    """Pairs in the order the pairing function counts them, by diagonals."""
    out = []
    s = 0
    while len(out) < n:
        out.extend((s - y, y) for y in range(s + 1))
        s += 1
    return out[:n]


def test_pair_matches_dovetail_order():
    for code, (x, y) in enumerate(dovetail(500)):
        assert cantor_pair(x, y) == code
        assert cantor_unpair(code) == (x, y)


@pytest.mark.parametrize("x, y, code", [(0, 0, 0), (1, 1, 4), (0, 2, 5)])
def test_pair_examples(x, y, code):
    assert cantor_pair(x, y) == code


def test_pair_bijective_on_initial_segment():
    for c in range(0, 10**6, 997):
        assert cantor_pair(*cantor_unpair(c)) == c


@given(st.integers(0, 10**9), st.integers(0, 10**9))
def test_unpair_inverts_pair(x, y):
    assert cantor_unpair(cantor_pair(x, y)) == (x, y)


def test_negative_inputs_rejected():
    with pytest.raises(CodingError):
        cantor_pair(-1, 0)
    with pytest.raises(CodingError):
        cantor_unpair(-3)


@pytest.mark.parametrize("xs, arity, code", [([7], 1, 7), ([0, 1], 2, 2), ([0, 1, 0], 3, 3)])
def test_tuple_examples(xs, arity, code):
    assert tuple_encode(xs, arity) == code
    assert tuple_decode(code, arity) == tuple(xs)


def test_tuple_arity_mismatch():
    with pytest.raises(CodingError):
        tuple_encode([1, 2], 3)


@given(st.lists(st.integers(0, 50), min_size=1, max_size=4))
def test_tuple_round_trip(xs):
    assert tuple_decode(tuple_encode(xs, len(xs)), len(xs)) == tuple(xs)


def test_join_examples():
    assert join([{0}, {0}], 2) == {0, 1}
    assert join([{5}, set(), {2}], 3) == {15, 8}


@given(st.integers(2, 3).flatmap(
    lambda k: st.lists(st.frozensets(st.integers(0, 200), max_size=12), min_size=k, max_size=k)))
def test_join_project_round_trip(parts):
    k = len(parts)
    joined = join(parts, k)
    assert [project(joined, j, k) for j in range(k)] == list(parts)
    assert split(joined, k) == tuple(parts)


def test_join_needs_two_columns():
    with pytest.raises(CodingError):
        join([{1}], 1)


def test_dual_pairs_even_and_odd():
    assert dual(10) == 11 and dual(11) == 10 and dual(0) == 1


def test_graph_codes_round_trip():
    f = {0: 2, 1: 0, 2: 1}
    assert dict(decode_graph(graph_codes(f))) == f
