"""Sample operators used by the sweeps, the experiment runner and the tests.

Morphism-side functionals read ``D(A) + Graph(f) + D(B)`` (3-column join);
their structure queries only mention elements already confirmed to be in
the universe, which keeps them meaningful on finite windows.
"""
from __future__ import annotations

import random
from itertools import product

from .coding import cantor_pair
from .diagrams import RelationalLanguage
from .machines import EnumAxiom, EnumOperator, QueryAxiom, RuleOperator, TuringFunctional

PAIR_LANGUAGE = RelationalLanguage((2, 2), ("P", "Q"))


def graph_position(x: int, y: int) -> int:
    """Oracle position of ``<x, y>`` in the middle column of a 3-fold join."""
    return 3 * cantor_pair(x, y) + 1


def _search_prefix(x: int, y: int) -> list[tuple[int, int]]:
    return [(graph_position(x, j), 0) for j in range(y)] + [(graph_position(x, y), 1)]


def search_functional(bound: int, name: str = "search") -> TuringFunctional:
    """``F(f) = f``: on input x query ``f(x) = 0, 1, ...`` and output the hit."""
    axioms = [QueryAxiom(tuple(_search_prefix(x, y)), x, y)
              for x in range(bound) for y in range(bound)]
    return TuringFunctional(tuple(axioms), name)


def identity_graph_operator(bound: int, name: str = "graph-copy") -> EnumOperator:
    axioms = [EnumAxiom(frozenset({graph_position(x, y)}), cantor_pair(x, y))
              for x in range(bound) for y in range(bound)]
    return EnumOperator(tuple(axioms), name)


def graph_copy_rule(name: str = "graph-copy") -> RuleOperator:
    """Unbounded version of :func:`identity_graph_operator`."""

    def derive(elements, stage):
        return {c // 3: frozenset({c}) for c in elements if c % 3 == 1}

    return RuleOperator(derive, name)


def two_axiom_functional(lang: RelationalLanguage = PAIR_LANGUAGE) -> TuringFunctional:
    """Input 0 only: output 0 when ``f(0) != 1``; output 1 when ``f(0) = 1`` and ``P(0,0)`` in A."""
    p00 = 3 * (2 * lang.atom_code(0, (0, 0)))
    return TuringFunctional((
        QueryAxiom(((graph_position(0, 1), 0),), 0, 0),
        QueryAxiom(((graph_position(0, 1), 1), (p00, 1)), 0, 1),
    ), "two-axiom")


def random_star_functional(rng: random.Random, bound: int,
                           lang_a: RelationalLanguage = PAIR_LANGUAGE,
                           lang_b: RelationalLanguage = PAIR_LANGUAGE,
                           name: str = "random-star") -> TuringFunctional:
    """Search for ``f(x) = y``, then branch on up to two atoms about ``0, x`` in A and ``0, y`` in B."""
    axioms = []
    for x, y in product(range(bound), repeat=2):
        prefix = _search_prefix(x, y)
        atoms = []
        for col, lang, pts in ((0, lang_a, (0, x)), (2, lang_b, (0, y))):
            for i in range(len(lang)):
                for args in product(pts, repeat=lang.arities[i]):
                    atoms.append(3 * (2 * lang.atom_code(i, args) + rng.randrange(2)) + col)
        atoms = sorted(set(atoms))
        picked = rng.sample(atoms, min(len(atoms), rng.randrange(3)))
        for bits in product((0, 1), repeat=len(picked)):
            leaf = rng.randrange(4)
            if leaf == 0:
                continue
            out = y if leaf < 3 else (y + 1) % bound
            axioms.append(QueryAxiom(tuple(prefix + list(zip(picked, bits))), x, out))
    return TuringFunctional(tuple(axioms), name)


def random_diagram_functional(rng: random.Random, lang: RelationalLanguage, window: int,
                              depth: int = 2, name: str = "random-diagram") -> TuringFunctional:
    """A functional computing some atomic diagram on the atoms over ``[0, window)``.

    The value on ``R(u)`` is a random decision tree over atoms mentioning only
    elements of ``u`` and 0; the dual atom gets the complementary bit.
    """
    axioms = []
    for i in range(len(lang)):
        for args in product(range(window), repeat=lang.arities[i]):
            code = 2 * lang.atom_code(i, args)
            pts = sorted(set(args) | {0})
            pool = sorted({2 * lang.atom_code(j, t) + rng.randrange(2)
                           for j in range(len(lang))
                           for t in product(pts, repeat=lang.arities[j])})
            picked = rng.sample(pool, min(depth, len(pool)))
            for bits in product((0, 1), repeat=len(picked)):
                value = rng.randrange(2)
                queries = tuple(zip(picked, bits))
                axioms.append(QueryAxiom(queries, code, value))
                axioms.append(QueryAxiom(queries, code + 1, 1 - value))
    return TuringFunctional(tuple(axioms), name)
