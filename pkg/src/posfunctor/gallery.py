"""Example structures and functors, each driven by a finite c.e. schedule.

The schedule plays the part of the halting set: an element is "enumerated"
at the stage the schedule lists for it, and builders expose the structure at
every stage.  Layouts are fixed so that rebuilds are bit-identical.

Successor structures live on ``[0, window)`` with ``Zero(0)`` and
``S(x, x+1)``.  The cycle graph has the loop vertex ``a = 0`` followed by
cycles packed consecutively, cycle ``n`` having length ``n + 3``.  The two
categoricity graphs number gadget ``i`` as ``v_i, a_i, b_i, s_i = 4i .. 4i+3``
and put the vertices added for the k-th schedule entry (ordered by stage,
then element) at ``4*window + 2k`` and ``4*window + 2k + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .coding import cantor_pair, join, project
from .diagrams import (
    ATOMIC,
    POSITIVE,
    CESchedule,
    RelationalLanguage,
    StructurePresentation,
    encode_diagram,
    invert,
    is_isomorphism,
    transport,
)
from .errors import BoundsError, DecodeError, SearchExhausted
from .functors import EffectivizedFunctor
from .machines import (
    ComputedFunctional,
    EnumAxiom,
    EnumOperator,
    QueryAxiom,
    RuleOperator,
    TuringFunctional,
)
from .samples import graph_copy_rule, identity_graph_operator, search_functional

SUCC_K = RelationalLanguage((1, 2, 1), ("Zero", "S", "K"))
SUCC = RelationalLanguage((1, 2), ("Zero", "S"))
GRAPH = RelationalLanguage((2,), ("E",))

ZERO, SUCCESSOR, HALT = 0, 1, 2
EDGE = 0

FLAVORS = ("with-K", "with-K-bar", "plain")
COPIES = ("B1", "B2")

DEFAULT_SCHEDULE = CESchedule(((1, 0), (3, 2), (4, 5), (7, 1), (10, 3), (12, 4)))


def _check_window(window: int) -> None:
    if window < 1:
        raise BoundsError(f"window must be at least 1, got {window}")


def _finish(s: StructurePresentation, stage: int | None) -> StructurePresentation:
    return s if stage is None else s.snapshot(stage)


def build_successor(flavor: str, schedule: CESchedule, window: int,
                    stage: int | None = None) -> StructurePresentation:
    """``(w, 0, s, K)``, ``(w, 0, s, K-bar)`` or ``(w, 0, s)`` on ``[0, window)``.

    The K flavors are total at the final stage.  Before that the atoms of
    elements still to be enumerated are undetermined: ``with-K`` learns
    ``K(x)`` at x's stage, ``with-K-bar`` learns ``not K(x)`` then.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    _check_window(window)
    lang = SUCC if flavor == "plain" else SUCC_K
    facts = {(ZERO, (0,), 0)} | {(SUCCESSOR, (x, x + 1), 0) for x in range(window - 1)}
    neg = {(ZERO, (x,), 0) for x in range(1, window)}
    neg |= {(SUCCESSOR, (x, y), 0) for x in range(window) for y in range(window) if y != x + 1}
    if flavor != "plain":
        for x in range(window):
            st = schedule.stage_of(x)
            inside = st is not None
            if flavor == "with-K":
                (facts if inside else neg).add((HALT, (x,), st if inside else 0))
            else:
                (neg if inside else facts).add((HALT, (x,), st if inside else 0))
    return _finish(StructurePresentation(lang, window, frozenset(facts), frozenset(neg), True),
                   stage)


def _atomic_code(i: int, args: tuple[int, ...], negated: bool = False) -> int:
    return 2 * SUCC_K.atom_code(i, args) + int(negated)


def functor_flip(window: int = 16) -> EffectivizedFunctor:
    """Computable functor exchanging ``K`` with its complement, identity on maps.

    An input atom only gets an answer when the oracle already decides it, so
    atoms outside the structure's window diverge rather than read as 0.
    """
    _check_window(window)
    axioms = []
    for i in range(len(SUCC_K)):
        for args in SUCC_K.tuples(i, window):
            c = _atomic_code(i, args)
            src, src_dual = (c + 1, c) if i == HALT else (c, c + 1)
            # input c answers 1 iff src holds
            axioms.append(QueryAxiom(((src, 1),), c, 1))
            axioms.append(QueryAxiom(tuple(sorted(((src, 0), (src_dual, 1)))), c, 0))
            axioms.append(QueryAxiom(((src_dual, 1),), c + 1, 1))
            axioms.append(QueryAxiom(tuple(sorted(((src_dual, 0), (src, 1)))), c + 1, 0))
    obj = TuringFunctional(tuple(axioms), "flip")
    return EffectivizedFunctor("computable", obj, search_functional(window, "flip-maps"),
                               ATOMIC, SUCC_K, SUCC_K, "flip")


def _positive_rel(lang: RelationalLanguage, i: int, args: tuple[int, ...]) -> int:
    return 3 * lang.atom_code(i, args) + 2


def functor_drop_K(window: int = 32) -> EffectivizedFunctor:
    """Positive enumerable functor forgetting ``K``; listed explicitly over the window."""
    _check_window(window)
    axioms = []
    for x in range(window):
        for y in range(window):
            for col in (0, 1):
                c = 3 * cantor_pair(x, y) + col
                axioms.append(EnumAxiom(frozenset({c}), c))
    for i in (ZERO, SUCCESSOR):
        for args in SUCC_K.tuples(i, window):
            c = _positive_rel(SUCC_K, i, args)
            axioms.append(EnumAxiom(frozenset({c}), _positive_rel(SUCC, i, args)))
    obj = EnumOperator(tuple(axioms), "drop-K")
    return EffectivizedFunctor("positive-enumerable", obj, identity_graph_operator(window),
                               POSITIVE, SUCC_K, SUCC, "drop-K")


def _add_k_derive(schedule: CESchedule):
    def derive(elements, stage):
        out = {}
        succ: dict[int, list[int]] = {}
        zeros = []
        for c in sorted(elements):
            if c % 3 < 2:
                out[c] = frozenset({c})
                continue
            try:
                i, args = SUCC.decode_relation_code(c // 3)
            except DecodeError:
                # not an atom of the source language: no axiom mentions it
                continue
            out[_positive_rel(SUCC_K, i, args)] = frozenset({c})
            if i == ZERO:
                zeros.append(args[0])
            else:
                succ.setdefault(args[0], []).append(args[1])
        members = schedule.members(stage)
        if not members:
            return out
        depth = max(members)
        # every S-path of allowed length from a Zero element yields K at its end
        for z in zeros:
            stack = [(z, (z,), frozenset({_positive_rel(SUCC, ZERO, (z,))}))]
            while stack:
                e, path, premise = stack.pop()
                d = len(path) - 1
                if d in members:
                    out.setdefault(_positive_rel(SUCC_K, HALT, (e,)), premise)
                if d >= depth:
                    continue
                for nxt in succ.get(e, ()):
                    if nxt not in path:
                        stack.append((nxt, path + (nxt,),
                                      premise | {_positive_rel(SUCC, SUCCESSOR, (e, nxt))}))
        return out
    return derive


def functor_add_K(schedule: CESchedule) -> EffectivizedFunctor:
    """Positive enumerable functor restoring ``K`` from the schedule.

    ``K(e)`` is enumerated once ``e`` is reached from the Zero element by an
    S-path whose length ``d`` has been enumerated into the schedule.
    """
    obj = RuleOperator(_add_k_derive(schedule), "add-K", schedule.final_stage)
    return EffectivizedFunctor("positive-enumerable", obj, graph_copy_rule(), POSITIVE,
                               SUCC, SUCC_K, "add-K")


def cycle_start(n: int) -> int:
    """First vertex of cycle ``n`` in the default layout."""
    return 1 + sum(k + 3 for k in range(n))


def build_cycle_graph(schedule: CESchedule, window: int, stage: int | None = None,
                      zero_on_cycle: int | None = None) -> StructurePresentation:
    """Loop vertex ``a`` plus cycles ``0 .. window-1``; ``a`` joins cycle n when n is enumerated.

    ``zero_on_cycle=n`` swaps the labels of ``a`` and the first vertex of cycle ``n``.
    """
    _check_window(window)
    edges = {(0, 0, 0)}
    for n in range(window):
        start, length = cycle_start(n), n + 3
        for k in range(length):
            u, v = start + k, start + (k + 1) % length
            edges |= {(u, v, 0), (v, u, 0)}
        st = schedule.stage_of(n)
        if st is not None:
            edges |= {(0, start, st), (start, 0, st)}
    size = cycle_start(window)
    g = StructurePresentation(GRAPH, size, frozenset((EDGE, (u, v), s) for u, v, s in edges))
    if zero_on_cycle is not None:
        if not 0 <= zero_on_cycle < window:
            raise BoundsError(f"cycle {zero_on_cycle} is outside the window of {window} cycles")
        g = transport(g, _swap(size, 0, cycle_start(zero_on_cycle)))
    return _finish(g, stage)


def _swap(size: int, x: int, y: int) -> dict[int, int]:
    perm = {k: k for k in range(size)}
    perm[x], perm[y] = y, x
    return perm


def gadget(i: int) -> tuple[int, int, int, int]:
    """``(v_i, a_i, b_i, s_i)``."""
    return 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3


def _entries(schedule: CESchedule, window: int) -> list[tuple[int, int]]:
    return sorted(((s, x) for x, s in schedule.entries if x < window))


def build_categoricity_graph(copy: str, schedule: CESchedule, window: int,
                             stage: int | None = None) -> StructurePresentation:
    """Ray with a loop at ``v_0``; ``v_i`` carries ``a_i - s_i`` and ``b_i``.

    When ``i`` is enumerated, B1 hangs a path of two new vertices on ``b_i``
    while B2 gives ``s_i`` and ``b_i`` one new child each.
    """
    if copy not in COPIES:
        raise ValueError(f"unknown copy {copy!r}")
    _check_window(window)
    edges = {(0, 0, 0)}
    for i in range(window):
        v, a, b, s = gadget(i)
        pairs = [(v, a), (v, b), (a, s)]
        if i + 1 < window:
            pairs.append((v, gadget(i + 1)[0]))
        edges |= {(p, q, 0) for p, q in pairs} | {(q, p, 0) for p, q in pairs}
    stages = [0] * (4 * window)
    for k, (st, x) in enumerate(_entries(schedule, window)):
        _, _, b, s = gadget(x)
        e1, e2 = 4 * window + 2 * k, 4 * window + 2 * k + 1
        stages += [st, st]
        pairs = [(b, e1), (e1, e2)] if copy == "B1" else [(s, e1), (b, e2)]
        edges |= {(p, q, st) for p, q in pairs} | {(q, p, st) for p, q in pairs}
    g = StructurePresentation(GRAPH, len(stages), frozenset((EDGE, (u, v), s) for u, v, s in edges),
                              element_stages=tuple(stages))
    return _finish(g, stage)


def unique_isomorphism_B1_B2(schedule: CESchedule, window: int,
                             stage: int | None = None) -> dict[int, int]:
    """The isomorphism B1 -> B2, treating the schedule at ``stage`` as the whole set.

    Straight on gadgets not yet enumerated; crossed on enumerated ones, where
    ``a_i -> b_i`` and ``b_i -> a_i`` and the added vertices follow by depth.
    """
    _check_window(window)
    b1 = build_categoricity_graph("B1", schedule, window)
    b2 = build_categoricity_graph("B2", schedule, window)
    st = b1.final_stage if stage is None else stage
    g = {x: x for x in range(b1.universe_size(st))}
    for k, (es, x) in enumerate(_entries(schedule, window)):
        if es > st:
            continue
        _, a, b, s = gadget(x)
        e1, e2 = 4 * window + 2 * k, 4 * window + 2 * k + 1
        g.update({a: b, b: a, s: e2, e1: s, e2: e1})
    if not is_isomorphism(g, b1, b2, st):
        raise BoundsError("crossed matching failed to be an isomorphism on the window")
    return g


def _cycle_parities(codes, lang: RelationalLanguage = GRAPH):
    """Loop at 0, or cycles through 0 in the edge atoms of a positive diagram.

    Returns ``{parity: premise}`` where parity 0 also covers the loop case.
    """
    loop = _positive_rel(lang, EDGE, (0, 0))
    if loop in codes:
        return {0: frozenset({loop})}
    adj: dict[int, list[int]] = {}
    for c in sorted(codes):
        if c % 3 == 2:
            try:
                i, (u, v) = lang.decode_relation_code(c // 3)
            except DecodeError:
                continue
            if i == EDGE and u != v:
                adj.setdefault(u, []).append(v)
    found: dict[int, frozenset[int]] = {}
    stack = [(0, (0,))]
    while stack and len(found) < 2:
        u, path = stack.pop()
        for v in sorted(adj.get(u, ()), reverse=True):
            if v == 0 and len(path) >= 3:
                parity = len(path) % 2
                if parity not in found:
                    cyc = path + (0,)
                    found[parity] = frozenset(_positive_rel(lang, EDGE, (p, q))
                                              for p, q in zip(cyc, cyc[1:]))
            elif v not in path:
                stack.append((v, path + (v,)))
    return found


def choose_copy(codes) -> tuple[str, frozenset[int]] | None:
    """The copy a positive cycle-graph diagram is sent to, with the premise deciding it."""
    found = _cycle_parities(frozenset(codes))
    if not found:
        return None
    parity = min(found)
    return ("B1" if parity == 0 else "B2"), found[parity]


def functor_parity(schedule: CESchedule, window: int) -> EffectivizedFunctor:
    """Positive star-enumerable functor from cycle graphs to categoricity graphs.

    Waits for the loop at 0 or a cycle through 0: the loop or an even cycle
    selects B1, an odd cycle B2.  Maps go to the unique isomorphism between
    the chosen copies, read off the schedule.
    """
    _check_window(window)

    @lru_cache(maxsize=None)
    def target(copy: str, stage: int) -> frozenset[int]:
        return encode_diagram(build_categoricity_graph(copy, schedule, window), POSITIVE, stage)

    @lru_cache(maxsize=None)
    def iso(stage: int) -> tuple[dict[int, int], dict[int, int]]:
        g = unique_isomorphism_B1_B2(schedule, window, stage)
        return g, invert(g)

    def derive(elements, stage):
        found = _cycle_parities(elements)
        out = {}
        for parity, premise in sorted(found.items()):
            for c in target("B1" if parity == 0 else "B2", stage):
                out.setdefault(c, premise)
        return out

    @lru_cache(maxsize=16)
    def copies(ones: frozenset[int]):
        return choose_copy(project(ones, 0, 3)), choose_copy(project(ones, 2, 3))

    def morphism(oracle, x, stage):
        left, right = copies(oracle.ones)
        if left is None or right is None:
            return None
        forward, backward = iso(stage)
        if left[0] == right[0]:
            return x if x in forward else None
        return (forward if left[0] == "B1" else backward).get(x)

    obj = RuleOperator(derive, "parity", schedule.final_stage)
    mor = ComputedFunctional(morphism, "unique-iso", schedule.final_stage)
    return EffectivizedFunctor("positive-star-enumerable", obj, mor, POSITIVE, GRAPH, GRAPH,
                               "parity")


def parity_copies(window: int, schedule: CESchedule, even_cycle: int = 1, odd_cycle: int = 0,
                  stage: int | None = None):
    """Cycle-graph copies with 0 on an even and an odd cycle, and the map between them."""
    size = cycle_start(max(window, even_cycle + 1, odd_cycle + 1))
    w = max(window, even_cycle + 1, odd_cycle + 1)
    hat = build_cycle_graph(schedule, w, stage, zero_on_cycle=even_cycle)
    tilde = build_cycle_graph(schedule, w, stage, zero_on_cycle=odd_cycle)
    s_hat = _swap(size, 0, cycle_start(even_cycle))
    s_tilde = _swap(size, 0, cycle_start(odd_cycle))
    f = {x: s_tilde[s_hat[x]] for x in range(size)}
    return hat, f, tilde


@dataclass(frozen=True)
class MonotonicityWitness:
    """Oracle prefixes ``X <= Y`` on which the correct morphism output at ``element`` changes."""

    gadget: int
    stage_before: int
    stage_after: int
    smaller: frozenset[int]
    larger: frozenset[int]
    element: int
    value_before: int
    value_after: int

    def to_dict(self) -> dict:
        return {"gadget": self.gadget, "stage_before": self.stage_before,
                "stage_after": self.stage_after, "element": self.element,
                "value_before": self.value_before, "value_after": self.value_after,
                "smaller_size": len(self.smaller), "larger_size": len(self.larger)}


def find_monotonicity_violation(schedule: CESchedule, window: int) -> MonotonicityWitness:
    """First gadget whose matching flips between two nested morphism oracles.

    The source copies put 0 on cycle 1 (even, so B1) and on cycle 0 (odd, so
    B2).  For an element enumerated at stage ``s > 0`` the oracle at ``s - 1``
    is contained in the one at ``s``, yet the correct image of ``a_i`` moves
    from ``a_i`` to ``b_i``.  Any enumeration operator producing the first
    pair would keep producing it, so none computes the morphism map.
    """
    _check_window(window)
    functor = functor_parity(schedule, window)
    hat, f, tilde = parity_copies(window, schedule)
    for x, s in schedule.entries:
        if x >= window or s == 0:
            continue
        before, after = s - 1, s
        oracles = [join([encode_diagram(hat, POSITIVE, st), frozenset(cantor_pair(u, v)
                                                                      for u, v in f.items()),
                         encode_diagram(tilde, POSITIVE, st)], 3) for st in (before, after)]
        if not oracles[0] <= oracles[1]:
            continue
        _, a, _, _ = gadget(x)
        g0 = unique_isomorphism_B1_B2(schedule, window, before)
        g1 = unique_isomorphism_B1_B2(schedule, window, after)
        if g0[a] == g1[a]:
            continue
        # replay through the functor's own morphism part
        m0 = functor.morphism_map(hat, f, tilde, before)
        m1 = functor.morphism_map(hat, f, tilde, after)
        if m0.get(a) != g0[a] or m1.get(a) != g1[a]:
            continue
        return MonotonicityWitness(x, before, after, oracles[0], oracles[1], a, g0[a], g1[a])
    raise SearchExhausted("no gadget changes its matching within the window")
