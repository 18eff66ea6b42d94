"""Brute-force isomorphism search between small window presentations.

Used as an independent oracle for the gallery's hand-built matchings.  The
search itself is networkx's VF2 matcher; this module only translates
presentations into labelled digraphs.
"""
from __future__ import annotations

from typing import Iterator

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .diagrams import StructurePresentation


def _digraph(s: StructurePresentation, stage: int | None) -> nx.DiGraph:
    """Nodes carry unary relations, edges carry the binary relations that hold on them."""
    if any(a > 2 for a in s.language.arities):
        raise ValueError("isomorphism search handles unary and binary relations only")
    g = nx.DiGraph()
    for x in range(s.universe_size(stage)):
        g.add_node(x, unary=frozenset())
    for i, args in s.facts_at(stage):
        if len(args) == 1:
            g.nodes[args[0]]["unary"] |= {i}
        else:
            u, v = args
            if g.has_edge(u, v):
                g.edges[u, v]["rels"] |= {i}
            else:
                g.add_edge(u, v, rels=frozenset({i}))
    return g


def find_isomorphisms(a: StructurePresentation, b: StructurePresentation,
                      stage: int | None = None, limit: int | None = None) -> Iterator[dict[int, int]]:
    """All isomorphisms ``a -> b`` on the windows at ``stage`` (at most ``limit``)."""
    ga, gb = _digraph(a, stage), _digraph(b, stage)
    if ga.number_of_nodes() != gb.number_of_nodes():
        return
    matcher = DiGraphMatcher(ga, gb, node_match=lambda p, q: p["unary"] == q["unary"],
                             edge_match=lambda p, q: p["rels"] == q["rels"])
    for k, m in enumerate(matcher.isomorphisms_iter()):
        if limit is not None and k >= limit:
            return
        yield dict(sorted(m.items()))


def automorphisms(s: StructurePresentation, stage: int | None = None,
                  limit: int | None = None) -> list[dict[int, int]]:
    return list(find_isomorphisms(s, s, stage, limit))


def isomorphic(a: StructurePresentation, b: StructurePresentation,
               stage: int | None = None) -> bool:
    return next(find_isomorphisms(a, b, stage, 1), None) is not None
