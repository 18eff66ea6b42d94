import random

import pytest

from posfunctor.diagrams import POSITIVE, CESchedule, encode_diagram, invert, same_structure
from posfunctor.errors import BoundsError, SearchExhausted, TotalityError
from posfunctor.functors import compose
from posfunctor.gallery import (
    DEFAULT_SCHEDULE,
    HALT,
    SUCC,
    build_categoricity_graph,
    build_cycle_graph,
    build_successor,
    choose_copy,
    cycle_start,
    find_monotonicity_violation,
    functor_add_K,
    functor_drop_K,
    functor_flip,
    functor_parity,
    gadget,
    parity_copies,
    unique_isomorphism_B1_B2,
)
from posfunctor.isomorphism import automorphisms, find_isomorphisms

EMPTY = CESchedule(())


def k_members(s, stage=None):
    return {args[0] for args in s.relation(HALT, stage)}


def neighbours(s, stage=None):
    adj = {}
    for u, v in s.relation(0, stage):
        adj.setdefault(u, set()).add(v)
    return adj


def side_depth(s, root, start, stage=None):
    """Longest shortest-path distance from ``start`` in the component left after removing ``root``."""
    adj = neighbours(s, stage)
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj.get(u, ()):
                if v != root and v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return max(dist.values())


def test_successor_examples():
    sched = CESchedule(((1, 0), (3, 2)))
    with_k = build_successor("with-K", sched, 5)
    bar = build_successor("with-K-bar", sched, 5)
    assert k_members(with_k) == {1, 3}
    assert k_members(bar) == {0, 2, 4}
    empty = build_successor("with-K", EMPTY, 5)
    assert k_members(empty) == set()
    assert {args[0] for i, args, _ in empty.negative_facts if i == HALT} == set(range(5))
    assert build_successor("plain", sched, 5).language == SUCC
    with_k.check_total()


def test_successor_stages():
    sched = CESchedule(((1, 0), (3, 2)))
    assert k_members(build_successor("with-K", sched, 5, stage=1)) == {1}
    with pytest.raises(ValueError):
        build_successor("other", sched, 5)
    with pytest.raises(BoundsError):
        build_successor("plain", sched, 0)


def test_rebuilds_are_identical():
    for build in (lambda: build_cycle_graph(DEFAULT_SCHEDULE, 6),
                  lambda: build_categoricity_graph("B2", DEFAULT_SCHEDULE, 6)):
        assert build() == build()


def test_flip_examples():
    flip = functor_flip(16)
    with_k = build_successor("with-K", DEFAULT_SCHEDULE, 16)
    bar = build_successor("with-K-bar", DEFAULT_SCHEDULE, 16)
    assert same_structure(flip.object_map(with_k), bar)
    assert same_structure(flip.object_map(flip.object_map(with_k)), with_k)


def test_drop_then_add():
    with_k = build_successor("with-K", DEFAULT_SCHEDULE, 32)
    st = DEFAULT_SCHEDULE.final_stage
    out = compose(functor_add_K(DEFAULT_SCHEDULE), functor_drop_K(32)).object_map(with_k, st)
    assert encode_diagram(out, POSITIVE) == encode_diagram(with_k, POSITIVE)


def test_add_k_with_empty_schedule_adds_nothing():
    plain = build_successor("plain", DEFAULT_SCHEDULE, 10)
    out = functor_add_K(EMPTY).object_map(plain)
    assert out.relation(HALT) == frozenset()
    assert out.relation(1) == plain.relation(1)


def test_cycle_graph_examples():
    sched = CESchedule(((3, 5),))
    g = build_cycle_graph(sched, 6)
    edge = (0, cycle_start(3))
    assert edge not in g.relation(0, 4)
    assert edge in g.relation(0, 5)
    empty = build_cycle_graph(EMPTY, 4)
    adj = neighbours(empty)
    assert adj[0] == {0}
    assert [cycle_start(n) for n in range(4)] == [1, 4, 8, 13]
    for n in range(4):
        start = cycle_start(n)
        assert all(len(adj[v]) == 2 for v in range(start, start + n + 3))
    moved = build_cycle_graph(EMPTY, 4, zero_on_cycle=2)
    assert (0, 0) not in moved.relation(0) and (8, 8) in moved.relation(0)
    with pytest.raises(BoundsError):
        build_cycle_graph(EMPTY, 4, zero_on_cycle=4)


@pytest.mark.parametrize("copy,depths", [("B1", (1, 2)), ("B2", (2, 1))])
def test_categoricity_depths(copy, depths):
    sched = CESchedule(((1, 3),))
    g = build_categoricity_graph(copy, sched, 3)
    v, a, b, _ = gadget(1)
    assert (side_depth(g, v, a), side_depth(g, v, b)) == depths
    v, a, b, _ = gadget(2)
    assert (side_depth(g, v, a), side_depth(g, v, b)) == (1, 0)
    early = [build_categoricity_graph(c, sched, 3, stage=2) for c in ("B1", "B2")]
    assert early[0].relation(0) == early[1].relation(0)


def test_unique_isomorphism_examples():
    straight = unique_isomorphism_B1_B2(EMPTY, 4)
    assert straight == {x: x for x in range(16)}
    g = unique_isomorphism_B1_B2(CESchedule(((2, 0),)), 4)
    moved = {x for x, y in g.items() if x != y}
    assert moved == {9, 10, 11, 16, 17}
    assert (g[9], g[10]) == (10, 9)
    assert {x: invert(g)[g[x]] for x in g} == {x: x for x in g}


def test_unique_isomorphism_matches_vf2():
    rng = random.Random(3)
    for _ in range(4):
        window = rng.randint(2, 5)
        xs = rng.sample(range(window), rng.randint(0, window))
        sched = CESchedule(tuple((x, rng.randint(0, 5)) for x in xs))
        b1 = build_categoricity_graph("B1", sched, window)
        b2 = build_categoricity_graph("B2", sched, window)
        found = list(find_isomorphisms(b1, b2, limit=2))
        assert found == [unique_isomorphism_B1_B2(sched, window)]


def test_categoricity_graphs_are_rigid():
    sched = CESchedule(((0, 1), (2, 2)))
    for copy in ("B1", "B2"):
        assert automorphisms(build_categoricity_graph(copy, sched, 4), limit=2) == [
            {x: x for x in range(20)}]


def test_cycle_graph_is_not_rigid_but_a_is_fixed():
    g = build_cycle_graph(EMPTY, 2)
    autos = automorphisms(g)
    assert len(autos) > 1
    assert all(m[0] == 0 for m in autos)


@pytest.mark.parametrize("label,n,want", [("a", None, "B1"), ("4-cycle", 1, "B1"),
                                          ("3-cycle", 0, "B2"), ("5-cycle", 2, "B2")])
def test_parity_examples(label, n, want):
    sched = CESchedule(((1, 2),))
    F = functor_parity(sched, 3)
    src = build_cycle_graph(sched, 4, zero_on_cycle=n)
    out = encode_diagram(F.object_map(src, 2), POSITIVE)
    assert out == encode_diagram(build_categoricity_graph(want, sched, 3), POSITIVE, 2)


def test_parity_waits_for_a_cycle():
    assert choose_copy(frozenset()) is None
    F = functor_parity(EMPTY, 2)
    assert F.object_part.apply(frozenset(), 0) == frozenset()


def test_parity_morphism_part():
    sched = CESchedule(((1, 2),))
    F = functor_parity(sched, 3)
    hat, f, tilde = parity_copies(3, sched)
    assert F.morphism_map(hat, f, tilde, 2) == unique_isomorphism_B1_B2(sched, 3, 2)
    assert F.morphism_map(hat, f, tilde, 1) == unique_isomorphism_B1_B2(sched, 3, 1)


def test_monotonicity_witness():
    sched = CESchedule(((1, 7),))
    w = find_monotonicity_violation(sched, 3)
    assert (w.gadget, w.stage_before, w.stage_after) == (1, 6, 7)
    assert w.smaller <= w.larger
    assert (w.element, w.value_before, w.value_after) == (5, 5, 6)
    bigger = find_monotonicity_violation(sched, 6)
    assert bigger.gadget <= 1
    with pytest.raises(SearchExhausted):
        find_monotonicity_violation(EMPTY, 4)


def test_flip_rejects_partial_oracle():
    partial = build_successor("with-K", DEFAULT_SCHEDULE, 8).snapshot(1)
    with pytest.raises(TotalityError):
        functor_flip(8).object_map(partial)
