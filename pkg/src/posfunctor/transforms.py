"""Constructive transformations between operator species.

* :func:`turing_to_enum_diagram` turns a Turing functional computing an
  atomic diagram into an enumeration operator (via the three-valued string
  ``alpha_p`` attached to every finite diagram ``p``).
* :func:`star_to_enum` turns a Turing functional on
  ``D(A) + Graph(f) + D(B)`` into an enumeration operator producing the graph
  of its output.
* :func:`enum_to_star` and :func:`enum_to_turing_diagram` go the other way by
  a deterministic search through the axiom listing.

Generated enumeration operators list, for every source axiom, only the least
premises that qualify.  Every other qualifying premise is a superset of a
listed one and so never changes the operator's output.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .coding import cantor_pair, cantor_unpair, dual, join
from .diagrams import ATOMIC, POSITIVE, RelationalLanguage
from .errors import (
    DecodeError,
    FormatError,
    FunctionalInconsistency,
    InconsistentDiagram,
    MalformedFunctional,
)
from .machines import EnumAxiom, EnumOperator, QueryAxiom, TuringFunctional

UNDEFINED = None


@dataclass(frozen=True)
class AlphaString:
    """Three-valued string: 1 on ``source``, 0 on duals of ``source``, undefined elsewhere."""

    values: tuple[int | None, ...]
    source: frozenset[int]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, x: int) -> int | None:
        return self.values[x]

    def __str__(self) -> str:
        return "".join("↑" if v is None else str(v) for v in self.values)


@dataclass(frozen=True)
class TotalizedAlpha:
    bits: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, x: int) -> int:
        return self.bits[x]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def check_consistent_diagram(p: Iterable[int]) -> None:
    p = frozenset(p)
    clash = sorted(c for c in p if dual(c) in p)
    if clash:
        raise InconsistentDiagram(f"diagram contains {clash[0]} and its dual {dual(clash[0])}")


def _check_decodes(p: Iterable[int], lang: RelationalLanguage) -> None:
    for c in p:
        lang.decode_relation_code(c // 2)


def alpha_string(p: Iterable[int], lang: RelationalLanguage) -> tuple[AlphaString, TotalizedAlpha]:
    p = frozenset(p)
    check_consistent_diagram(p)
    _check_decodes(p, lang)
    if not p:
        return AlphaString((), p), TotalizedAlpha(())
    top = max(max(c, dual(c)) for c in p)
    values = tuple(1 if x in p else 0 if dual(x) in p else UNDEFINED for x in range(top + 1))
    bits = tuple(1 if v == 1 else 0 for v in values)
    return AlphaString(values, p), TotalizedAlpha(bits)


def qualifies(phi: TuringFunctional, p: Iterable[int], x: int, lang: RelationalLanguage,
              stage: int | None = None) -> bool:
    """Does ``(p, x)`` belong to the operator built from ``phi``?

    True when some available axiom ``(q, x, 1)`` agrees with the totalized
    string and queries only positions where ``alpha_p`` is defined.
    """
    alpha, tilde = alpha_string(p, lang)
    for ax in phi.by_input.get(x, ()):
        if ax.output != 1 or (stage is not None and ax.stage > stage):
            continue
        if all(z < len(alpha) and alpha[z] is not UNDEFINED and tilde[z] == b
               for z, b in ax.queries):
            return True
    return False


def _least_diagram(queries: Iterable[tuple[int, int]], code_bound: int) -> frozenset[int] | None:
    """Smallest consistent diagram whose alpha string fixes every queried bit."""
    p = set()
    for z, b in queries:
        c = z if b == 1 else dual(z)
        if c >= code_bound:
            return None
        p.add(c)
    if any(dual(c) in p for c in p):
        return None
    return frozenset(p)


def turing_to_enum_diagram(phi: TuringFunctional, lang: RelationalLanguage,
                           code_bound: int) -> EnumOperator:
    phi.check_consistent()
    seen: dict[tuple[frozenset[int], int], int] = {}
    for ax in phi.axioms:
        if ax.output != 1 or ax.input >= code_bound:
            continue
        p = _least_diagram(ax.queries, code_bound)
        if p is None:
            continue
        _check_decodes(p, lang)
        key = (p, ax.input)
        seen[key] = min(seen.get(key, ax.stage), ax.stage)
    axioms = [EnumAxiom(p, x, s) for (p, x), s in seen.items()]
    return EnumOperator(tuple(axioms), f"enum({phi.name or 'phi'})")


def _split_queries(queries: Sequence[tuple[int, int]], lang_a: RelationalLanguage,
                   lang_b: RelationalLanguage):
    cols: list[list[tuple[int, int]]] = [[], [], []]
    for pos, b in queries:
        cols[pos % 3].append((pos // 3, b))
    for col, lang in ((0, lang_a), (2, lang_b)):
        for z, _ in cols[col]:
            try:
                lang.decode_relation_code(z // 2)
            except DecodeError as exc:
                raise MalformedFunctional(f"query in column {col} is not an atom: {exc}") from exc
    graph = {}
    for code, b in cols[1]:
        graph[cantor_unpair(code)] = b
    return cols[0], graph, cols[2]


def admissible_maps(graph_queries: dict[tuple[int, int], int], code_bound: int,
                    range_reading: str = "ones") -> list[dict[int, int]]:
    """Finite injections compatible with the queried part of a graph.

    A point with a 1-entry goes to that value.  A point with only 0-entries
    goes to any ``z`` with ``<u, z> < code_bound`` avoiding its own 0-entries
    and the excluded range: the values of 1-entries (``"ones"``) or every
    second coordinate mentioned (``"all"``).
    """
    if range_reading not in ("ones", "all"):
        raise ValueError(f"unknown range reading {range_reading!r}")
    ones: dict[int, set[int]] = {}
    zeros: dict[int, set[int]] = {}
    for (u, v), b in graph_queries.items():
        (ones if b else zeros).setdefault(u, set()).add(v)
    one_images = {v for vs in ones.values() for v in vs}
    mentioned = {v for _, v in graph_queries}
    excluded = one_images if range_reading == "ones" else mentioned
    points = sorted(set(ones) | set(zeros))
    choices = []
    for u in points:
        if u in ones:
            if len(ones[u]) > 1:
                return []
            choices.append(sorted(ones[u]))
            continue
        avoid = zeros[u] | excluded
        opts = []
        z = 0
        while cantor_pair(u, z) < code_bound:
            if z not in avoid:
                opts.append(z)
            z += 1
        choices.append(opts)
    maps = []
    for values in product(*choices):
        if len(set(values)) == len(values):
            maps.append(dict(zip(points, values)))
    return maps


def star_to_enum(phi_star: TuringFunctional, lang_a: RelationalLanguage,
                 lang_b: RelationalLanguage, code_bound: int, *,
                 oracle_format: str = ATOMIC, range_reading: str = "ones") -> EnumOperator:
    """Enumeration operator for the graph computed by ``phi_star``.

    Each axiom ``(q, x, y)`` contributes premises ``B + Graph(tau) + C`` with
    ``B``, ``C`` the least diagrams fixing the queried bits of the two
    structure columns and ``tau`` ranging over :func:`admissible_maps`.
    Only atomic-diagram oracles are accepted: on positive diagrams a queried
    0 cannot be confirmed by enumeration.
    """
    if oracle_format != ATOMIC:
        raise FormatError("star_to_enum is only sound on atomic-diagram oracles")
    axioms: list[EnumAxiom] = []
    seen: set[tuple[frozenset[int], int]] = set()
    for ax in phi_star.axioms:
        q0, q1, q2 = _split_queries(ax.queries, lang_a, lang_b)
        left = _least_diagram(q0, code_bound)
        right = _least_diagram(q2, code_bound)
        if left is None or right is None:
            continue
        target = cantor_pair(ax.input, ax.output)
        for tau in admissible_maps(q1, code_bound, range_reading):
            graph = {cantor_pair(u, v) for u, v in tau.items()}
            premise = join([left, graph, right], 3)
            if (premise, target) in seen:
                continue
            seen.add((premise, target))
            axioms.append(EnumAxiom(premise, target, ax.stage))
    return EnumOperator(tuple(axioms), f"star_to_enum({phi_star.name or 'phi'})")


def _search_paths(candidates: Sequence[tuple[frozenset[int], int, int]]):
    """Runs of the machine that checks candidate premises in listing order.

    Premise elements are queried in increasing order and a candidate is
    abandoned at its first 0.  Yields ``(query map, output, stage)`` for every
    run that reaches a fully confirmed premise.  Raises
    :class:`FunctionalInconsistency` when a later candidate with a different
    output is already confirmed on the same run.
    """
    out = []
    stack = [(0, {})]
    while stack:
        i, assign = stack.pop()
        while i < len(candidates):
            premise, y, st = candidates[i]
            if any(assign.get(c) == 0 for c in premise):
                i += 1
                continue
            unknown = sorted(c for c in premise if c not in assign)
            for t in range(len(unknown) - 1, -1, -1):
                branch = dict(assign)
                branch.update((c, 1) for c in unknown[:t])
                branch[unknown[t]] = 0
                stack.append((i + 1, branch))
            fire = dict(assign)
            fire.update((c, 1) for c in unknown)
            confirmed = {c for c, b in fire.items() if b == 1}
            for premise2, y2, _ in candidates[i + 1:]:
                if y2 != y and premise2 <= confirmed:
                    raise FunctionalInconsistency(
                        f"outputs {y} and {y2} are both confirmed by {sorted(confirmed)}")
            out.append((fire, y, st))
            break
    return out


def _listing(op: EnumOperator, stage_budget: int) -> list[EnumAxiom]:
    if not isinstance(op, EnumOperator):
        raise TypeError("search constructions need an explicitly listed EnumOperator")
    indexed = [(ax.stage, k, ax) for k, ax in enumerate(op.axioms) if ax.stage <= stage_budget]
    return [ax for _, _, ax in sorted(indexed, key=lambda t: t[:2])]


def enum_to_star(psi_star: EnumOperator, stage_budget: int, *,
                 oracle_format: str = ATOMIC) -> TuringFunctional:
    """Turing functional that, on input x, waits for some ``<x, y>`` to be enumerated.

    Works for atomic and positive oracle formats alike, since only confirmed
    premises are used.
    """
    if oracle_format not in (ATOMIC, POSITIVE):
        raise ValueError(f"unknown oracle format {oracle_format!r}")
    by_input: dict[int, list[tuple[frozenset[int], int, int]]] = {}
    for ax in _listing(psi_star, stage_budget):
        x, y = cantor_unpair(ax.conclusion)
        by_input.setdefault(x, []).append((ax.premise, y, ax.stage))
    axioms = []
    for x in sorted(by_input):
        for queries, y, st in _search_paths(by_input[x]):
            axioms.append(QueryAxiom(tuple(queries.items()), x, y, st))
    return TuringFunctional(tuple(axioms), f"enum_to_star({psi_star.name or 'psi'})")


def enum_to_turing_diagram(psi: EnumOperator, lang: RelationalLanguage,
                           stage_budget: int) -> TuringFunctional:
    """Decide ``x`` in ``psi``'s output by waiting for ``x`` or its dual.

    The functional diverges (evaluates to ``None``) when neither shows up
    within the budget, which is distinct from answering 0.
    """
    by_input: dict[int, list[tuple[frozenset[int], int, int]]] = {}
    for ax in _listing(psi, stage_budget):
        lang.decode_relation_code(ax.conclusion // 2)
        c = ax.conclusion
        by_input.setdefault(c, []).append((ax.premise, 1, ax.stage))
        by_input.setdefault(dual(c), []).append((ax.premise, 0, ax.stage))
    axioms = []
    for x in sorted(by_input):
        for queries, bit, st in _search_paths(by_input[x]):
            axioms.append(QueryAxiom(tuple(queries.items()), x, bit, st))
    return TuringFunctional(tuple(axioms), f"enum_to_turing({psi.name or 'psi'})")
