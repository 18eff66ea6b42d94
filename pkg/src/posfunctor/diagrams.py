"""Relational structures on finite windows, their diagrams and pullbacks.

Atomic diagram codes: ``2*<i, u>`` for ``R_i(u)`` and ``2*<i, u> + 1`` for its
negation, ``u`` the left-nested tuple code.  Positive diagrams are the
3-column join of equality, inequality and the relations, each relation atom
coded as ``<i, u>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

from .coding import cantor_pair, cantor_unpair, join, project, tuple_decode, tuple_encode
from .errors import (
    CompositionError,
    DecodeError,
    InsufficientClasses,
    MalformedPullback,
    TotalityError,
)

ATOMIC = "atomic"
POSITIVE = "positive"
FORMATS = (ATOMIC, POSITIVE)

Fact = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class RelationalLanguage:
    arities: tuple[int, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arities", tuple(self.arities))
        if any(a < 1 for a in self.arities):
            raise ValueError(f"arities must be positive: {self.arities}")
        names = tuple(self.names) or tuple(f"R{i}" for i in range(len(self.arities)))
        if len(names) != len(self.arities):
            raise ValueError("one name per relation")
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.arities)

    def atom_code(self, i: int, args: Sequence[int]) -> int:
        return cantor_pair(i, tuple_encode(args, self.arities[i]))

    def decode_relation_code(self, code: int) -> Fact:
        i, u = cantor_unpair(code)
        if i >= len(self.arities):
            raise DecodeError(f"code {code} names relation {i}, language has {len(self.arities)}")
        return i, tuple_decode(u, self.arities[i])

    def tuples(self, i: int, n: int) -> Iterable[tuple[int, ...]]:
        return product(range(n), repeat=self.arities[i])


@dataclass(frozen=True)
class StructurePresentation:
    """A structure on a finite window ``[0, universe_bound)`` given stage by stage.

    ``facts`` and ``negative_facts`` hold ``(relation, args, stage)`` triples.
    ``element_stages[x]`` is the stage at which element ``x`` joins the
    universe (non-decreasing in ``x``, so every stage sees an initial segment);
    an empty tuple means every element is present from stage 0.
    """

    language: RelationalLanguage
    universe_bound: int
    facts: frozenset = frozenset()
    negative_facts: frozenset = frozenset()
    total: bool = False
    element_stages: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "facts", frozenset(self.facts))
        object.__setattr__(self, "negative_facts", frozenset(self.negative_facts))
        es = tuple(self.element_stages)
        # all-zero stages say the same as no stages
        object.__setattr__(self, "element_stages", es if any(es) else ())
        if es and (len(es) != self.universe_bound or any(a > b for a, b in zip(es, es[1:]))):
            raise ValueError("element_stages must be non-decreasing with one entry per element")
        for i, args, stage in self.facts | self.negative_facts:
            if not 0 <= i < len(self.language):
                raise ValueError(f"fact on unknown relation {i}")
            if len(args) != self.language.arities[i]:
                raise ValueError(f"fact {i}{args} has wrong arity")
            if any(not 0 <= a < self.universe_bound for a in args):
                raise ValueError(f"fact {i}{args} leaves the universe [0, {self.universe_bound})")
            if stage < 0:
                raise ValueError("stages are non-negative")

    @classmethod
    def from_relations(cls, language: RelationalLanguage, n: int,
                       relations: Mapping[int, Iterable[Sequence[int]]], total: bool = True):
        """Static presentation; with ``total`` every missing tuple becomes a negative fact."""
        facts = {(i, tuple(t), 0) for i, ts in relations.items() for t in ts}
        neg = set()
        if total:
            pos = {(i, t) for i, t, _ in facts}
            neg = {(i, t, 0) for i in range(len(language)) for t in language.tuples(i, n)
                   if (i, t) not in pos}
        return cls(language, n, frozenset(facts), frozenset(neg), total)

    @property
    def final_stage(self) -> int:
        stages = [s for _, _, s in self.facts | self.negative_facts]
        return max(stages + list(self.element_stages) + [0])

    def universe_size(self, stage: int | None = None) -> int:
        if stage is None or not self.element_stages:
            return self.universe_bound
        return sum(1 for s in self.element_stages if s <= stage)

    def _at(self, facts, stage):
        if stage is None:
            stage = self.final_stage
        n = self.universe_size(stage)
        return frozenset((i, args) for i, args, s in facts
                         if s <= stage and all(a < n for a in args))

    def facts_at(self, stage: int | None = None) -> frozenset[Fact]:
        return self._at(self.facts, stage)

    def negative_facts_at(self, stage: int | None = None) -> frozenset[Fact]:
        return self._at(self.negative_facts, stage)

    def relation(self, i: int, stage: int | None = None) -> frozenset[tuple[int, ...]]:
        return frozenset(args for j, args in self.facts_at(stage) if j == i)

    def check_total(self, stage: int | None = None) -> None:
        """Every in-window atom sits in exactly one of facts / negative facts."""
        if not self.total:
            raise TotalityError("presentation is not declared total")
        pos, neg = self.facts_at(stage), self.negative_facts_at(stage)
        n = self.universe_size(stage)
        both = pos & neg
        if both:
            raise TotalityError(f"atom {min(both)} is both a fact and a negative fact")
        for i in range(len(self.language)):
            for t in self.language.tuples(i, n):
                if (i, t) not in pos and (i, t) not in neg:
                    raise TotalityError(f"atom {self.language.names[i]}{t} undetermined")

    def snapshot(self, stage: int | None = None) -> "StructurePresentation":
        """The presentation frozen at ``stage`` (all surviving data at stage 0)."""
        n = self.universe_size(stage)
        return StructurePresentation(
            self.language, n,
            frozenset((i, a, 0) for i, a in self.facts_at(stage)),
            frozenset((i, a, 0) for i, a in self.negative_facts_at(stage)),
            self.total)


@dataclass(frozen=True)
class Enumeration:
    """A map ``x -> values[x]`` on ``[0, N)``, onto ``[0, m)`` unless ``partial``."""

    values: tuple[int, ...]
    partial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if any(v < 0 for v in self.values):
            raise ValueError("enumeration values are naturals")
        if not self.partial and set(self.values) != set(range(self.image_size)):
            raise ValueError("enumeration must be onto an initial segment unless marked partial")

    @classmethod
    def identity(cls, n: int) -> "Enumeration":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, x: int) -> int:
        return self.values[x]

    @property
    def image_size(self) -> int:
        return max(self.values, default=-1) + 1

    @property
    def injective(self) -> bool:
        return len(set(self.values)) == len(self.values)


@dataclass(frozen=True)
class CESchedule:
    """Finite stand-in for a c.e. set: ``element`` is enumerated at ``stage``."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        entries = tuple(sorted((int(x), int(s)) for x, s in self.entries))
        xs = [x for x, _ in entries]
        if len(set(xs)) != len(xs):
            raise ValueError("schedule lists an element twice")
        if any(x < 0 or s < 0 for x, s in entries):
            raise ValueError("schedule entries are naturals")
        object.__setattr__(self, "entries", entries)

    def members(self, stage: int | None = None) -> frozenset[int]:
        return frozenset(x for x, s in self.entries if stage is None or s <= stage)

    def stage_of(self, x: int) -> int | None:
        return dict(self.entries).get(x)

    @property
    def final_stage(self) -> int:
        return max((s for _, s in self.entries), default=0)

    def __bool__(self) -> bool:
        return bool(self.entries)


@dataclass(frozen=True)
class Literal:
    """Decoded diagram atom.  ``kind`` is ``"rel"``, ``"eq"`` or ``"neq"``."""

    kind: str
    args: tuple[int, ...]
    relation: int | None = None
    positive: bool = True
    names: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __str__(self) -> str:
        if self.kind == "eq":
            return f"{self.args[0]} = {self.args[1]}"
        if self.kind == "neq":
            return f"{self.args[0]} != {self.args[1]}"
        name = self.names[self.relation] if self.names else f"R{self.relation}"
        body = f"{name}({','.join(map(str, self.args))})"
        return body if self.positive else "¬" + body


def atomic_diagram(s: StructurePresentation, stage: int | None = None) -> frozenset[int]:
    if not s.total:
        raise TotalityError("atomic diagrams need a presentation declared total")
    lang = s.language
    pos = {2 * lang.atom_code(i, args) for i, args in s.facts_at(stage)}
    neg = {2 * lang.atom_code(i, args) + 1 for i, args in s.negative_facts_at(stage)}
    return frozenset(pos | neg)


def _eq_neq(elements: Sequence[int], same) -> tuple[set[int], set[int]]:
    eq, neq = set(), set()
    for x in elements:
        for y in elements:
            (eq if same(x, y) else neq).add(cantor_pair(x, y))
    return eq, neq


def positive_diagram(s: StructurePresentation, stage: int | None = None) -> frozenset[int]:
    n = s.universe_size(stage)
    eq, neq = _eq_neq(range(n), lambda x, y: x == y)
    rel = {s.language.atom_code(i, args) for i, args in s.facts_at(stage)}
    return join([eq, neq, rel], 3)


def encode_diagram(s: StructurePresentation, fmt: str, stage: int | None = None) -> frozenset[int]:
    if fmt == ATOMIC:
        return atomic_diagram(s, stage)
    if fmt == POSITIVE:
        return positive_diagram(s, stage)
    raise ValueError(f"unknown diagram format {fmt!r}")


def decode_atom(c: int, lang: RelationalLanguage, fmt: str) -> Literal:
    if c < 0:
        raise DecodeError(f"negative code {c}")
    if fmt == ATOMIC:
        i, args = lang.decode_relation_code(c // 2)
        return Literal("rel", args, i, c % 2 == 0, lang.names)
    if fmt == POSITIVE:
        col, inner = c % 3, c // 3
        if col < 2:
            return Literal(("eq", "neq")[col], cantor_unpair(inner))
        i, args = lang.decode_relation_code(inner)
        return Literal("rel", args, i, True, lang.names)
    raise DecodeError(f"unknown diagram format {fmt!r}")


def encode_atom(lit: Literal, lang: RelationalLanguage, fmt: str) -> int:
    if fmt == ATOMIC:
        if lit.kind != "rel":
            raise DecodeError("atomic diagrams have no equality atoms")
        return 2 * lang.atom_code(lit.relation, lit.args) + (0 if lit.positive else 1)
    if lit.kind == "rel":
        if not lit.positive:
            raise DecodeError("positive diagrams have no negated atoms")
        return 3 * lang.atom_code(lit.relation, lit.args) + 2
    return 3 * cantor_pair(*lit.args) + (0 if lit.kind == "eq" else 1)


def decode_diagram(codes: Iterable[int], lang: RelationalLanguage, fmt: str,
                   universe_bound: int | None = None) -> StructurePresentation:
    """Read a finished diagram back into a presentation.

    Positive diagrams must carry equality as the diagonal of an initial
    segment and inequality as its complement; atomic ones are declared total.
    """
    lits = [decode_atom(c, lang, fmt) for c in codes]
    facts = {(l.relation, l.args, 0) for l in lits if l.kind == "rel" and l.positive}
    if fmt == ATOMIC:
        neg = {(l.relation, l.args, 0) for l in lits if l.kind == "rel" and not l.positive}
        if universe_bound is None:
            universe_bound = max((a + 1 for _, args, _ in facts | neg for a in args), default=0)
        return StructurePresentation(lang, universe_bound, facts, neg, True)
    eq = {l.args for l in lits if l.kind == "eq"}
    neq = {l.args for l in lits if l.kind == "neq"}
    n = len(eq)
    if eq != {(x, x) for x in range(n)}:
        raise DecodeError(f"equality column is not the diagonal of [0, {n})")
    if neq != {(x, y) for x in range(n) for y in range(n) if x != y}:
        raise DecodeError(f"inequality column does not match the universe [0, {n})")
    if universe_bound is not None and universe_bound != n:
        raise DecodeError(f"diagram describes {n} elements, expected {universe_bound}")
    return StructurePresentation(lang, n, facts, frozenset(), False)


def pullback(f: Enumeration, s: StructurePresentation, stage: int | None = None) -> frozenset[int]:
    """``f^-1(=) + f^-1(!=) + f^-1(R_0) + ...`` restricted to points mapped into the window."""
    n = s.universe_size(stage)
    dom = [x for x in range(len(f)) if f[x] < n]
    eq, neq = _eq_neq(dom, lambda x, y: f[x] == f[y])
    pre: dict[int, list[int]] = {}
    for x in dom:
        pre.setdefault(f[x], []).append(x)
    rel = set()
    for i, args in s.facts_at(stage):
        for xs in product(*(pre.get(a, ()) for a in args)):
            rel.add(s.language.atom_code(i, xs))
    return join([eq, neq, rel], 3)


def equivalence_classes(pb: Iterable[int], window: int) -> list[list[int]]:
    """Classes of the =-column of a pullback on ``[0, window)``, ordered by least element."""
    pb = frozenset(pb)
    eq = {cantor_unpair(c) for c in project(pb, 0, 3)}
    eq = {(x, y) for x, y in eq if x < window and y < window}
    for x in range(window):
        if (x, x) not in eq:
            raise MalformedPullback(f"=-column is not reflexive at {x}")
    parent = list(range(window))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in eq:
        if (y, x) not in eq:
            raise MalformedPullback(f"=-column is not symmetric at ({x}, {y})")
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, list[int]] = {}
    for x in range(window):
        groups.setdefault(find(x), []).append(x)
    classes = sorted(groups.values(), key=lambda c: c[0])
    closure = {(x, y) for c in classes for x in c for y in c}
    if closure != eq:
        x, y = min(closure - eq)
        raise MalformedPullback(f"=-column is not transitive: ({x}, {y}) missing")
    neq = {cantor_unpair(c) for c in project(pb, 1, 3)}
    neq = {(x, y) for x, y in neq if x < window and y < window}
    expected = {(x, y) for x in range(window) for y in range(window)} - closure
    if neq != expected:
        x, y = min(neq ^ expected)
        raise MalformedPullback(f"!=-column disagrees with the =-classes at ({x}, {y})")
    return classes


def class_index(classes: list[list[int]]) -> dict[int, int]:
    return {x: k for k, members in enumerate(classes) for x in members}


def quotient_by_equality(pb: Iterable[int], window: int,
                         language: RelationalLanguage) -> StructurePresentation:
    """Collapse a pullback by its =-column; the k-th class (by least element) becomes k."""
    pb = frozenset(pb)
    classes = equivalence_classes(pb, window)
    index = class_index(classes)
    facts = set()
    for code in project(pb, 2, 3):
        i, args = language.decode_relation_code(code)
        if any(a >= window for a in args):
            continue
        facts.add((i, tuple(index[a] for a in args), 0))
    return StructurePresentation(language, len(classes), frozenset(facts))


def spread_relations(p_target: Iterable[int], pb_source: Iterable[int], window: int,
                     language: RelationalLanguage) -> frozenset[int]:
    """Expand relation atoms over class indices to every member of the named classes.

    The result ``X`` satisfies ``join(=, !=, X) == pullback(g, target)`` where
    ``g`` sends each point of the window to the index of its class.
    """
    classes = equivalence_classes(pb_source, window)
    out = set()
    for code in project(frozenset(p_target), 2, 3):
        i, args = language.decode_relation_code(code)
        if any(a >= len(classes) for a in args):
            raise InsufficientClasses(
                f"atom {language.names[i]}{args} needs class {max(args)}, only {len(classes)} exist")
        for bs in product(*(classes[a] for a in args)):
            out.add(language.atom_code(i, bs))
    return frozenset(out)


def class_enumeration(pb: Iterable[int], window: int) -> Enumeration:
    """The enumeration sending each point to the index of its =-class."""
    index = class_index(equivalence_classes(pb, window))
    return Enumeration(tuple(index[x] for x in range(window)))


def compose_enumeration(f: Enumeration, i: Mapping[int, int]) -> Enumeration:
    """Pointwise ``x -> i[f(x)]``."""
    missing = sorted({v for v in f.values if v not in i})
    if missing:
        raise CompositionError(f"map is undefined on enumeration values {missing}")
    if len(set(i[v] for v in set(f.values))) != len(set(f.values)):
        raise CompositionError("map is not injective on the enumeration's image")
    try:
        return Enumeration(tuple(i[v] for v in f.values), f.partial)
    except ValueError as exc:
        raise CompositionError(str(exc)) from exc


def invert(i: Mapping[int, int]) -> dict[int, int]:
    inv = {v: k for k, v in i.items()}
    if len(inv) != len(i):
        raise CompositionError("map is not injective")
    return inv


def transport(s: StructurePresentation, perm: Mapping[int, int]) -> StructurePresentation:
    """Isomorphic copy of ``s`` with element ``x`` renamed ``perm[x]``."""
    n = s.universe_bound
    if sorted(perm.get(x, -1) for x in range(n)) != list(range(n)):
        raise CompositionError(f"map is not a permutation of [0, {n})")

    def move(facts):
        return frozenset((i, tuple(perm[a] for a in args), st) for i, args, st in facts)

    stages = ()
    if s.element_stages:
        moved = [0] * n
        for x in range(n):
            moved[perm[x]] = s.element_stages[x]
        stages = tuple(moved)
    return StructurePresentation(s.language, n, move(s.facts), move(s.negative_facts),
                                 s.total, stages)


def same_structure(a: StructurePresentation, b: StructurePresentation,
                   stage: int | None = None, stage_b: int | None = None) -> bool:
    """Window-exact equality of two presentations at the given stages."""
    stage_b = stage if stage_b is None else stage_b
    return (a.language == b.language
            and a.universe_size(stage) == b.universe_size(stage_b)
            and a.facts_at(stage) == b.facts_at(stage_b)
            and (not (a.total and b.total)
                 or a.negative_facts_at(stage) == b.negative_facts_at(stage_b)))


def is_isomorphism(perm: Mapping[int, int], a: StructurePresentation,
                   b: StructurePresentation, stage: int | None = None) -> bool:
    n = a.universe_size(stage)
    if n != b.universe_size(stage) or sorted(perm.get(x, -1) for x in range(n)) != list(range(n)):
        return False
    moved = {(i, tuple(perm[x] for x in args)) for i, args in a.facts_at(stage)}
    return moved == set(b.facts_at(stage))
