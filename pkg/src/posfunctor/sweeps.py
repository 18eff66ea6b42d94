"""Exhaustive equivalence checks between an operator and its transform.

The structure family is every total structure in a given language on a
small window (exhaustive, or a seeded sample for larger windows); each is
paired with all of its relabelings to get the isomorphism oracles
``D(A) + Graph(f) + D(B)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations, product

from .coding import cantor_unpair, graph_codes, join
from .diagrams import (
    ATOMIC,
    RelationalLanguage,
    StructurePresentation,
    encode_diagram,
    transport,
)
from .machines import TotalOracle


@dataclass
class SweepResult:
    oracles: int = 0
    comparisons: int = 0
    mismatches: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def merge(self, other: "SweepResult") -> "SweepResult":
        return SweepResult(self.oracles + other.oracles, self.comparisons + other.comparisons,
                           self.mismatches + other.mismatches)


def all_structures(lang: RelationalLanguage, n: int) -> list[StructurePresentation]:
    atoms = [(i, t) for i in range(len(lang)) for t in lang.tuples(i, n)]
    out = []
    for bits in product((0, 1), repeat=len(atoms)):
        rels: dict[int, list] = {i: [] for i in range(len(lang))}
        for (i, t), b in zip(atoms, bits):
            if b:
                rels[i].append(t)
        out.append(StructurePresentation.from_relations(lang, n, rels))
    return out


def sample_structures(lang: RelationalLanguage, n: int, count: int,
                      rng: random.Random) -> list[StructurePresentation]:
    out = []
    for _ in range(count):
        rels = {i: [t for t in lang.tuples(i, n) if rng.random() < 0.5] for i in range(len(lang))}
        out.append(StructurePresentation.from_relations(lang, n, rels))
    return out


def structure_family(lang: RelationalLanguage, seed: int = 0, exhaustive_up_to: int = 2,
                     sampled: dict[int, int] | None = None) -> list[StructurePresentation]:
    """Exhaustive family up to ``exhaustive_up_to`` elements plus seeded samples above."""
    rng = random.Random(seed)
    family = []
    for n in range(1, exhaustive_up_to + 1):
        family.extend(all_structures(lang, n))
    for n, count in sorted((sampled if sampled is not None else {3: 12, 4: 4}).items()):
        family.extend(sample_structures(lang, n, count, rng))
    return family


def iso_pairs(structures):
    """``(A, f, B)`` for each structure and each relabeling ``f`` of its window."""
    for a in structures:
        n = a.universe_bound
        for perm in permutations(range(n)):
            f = dict(enumerate(perm))
            yield a, f, transport(a, f)


def morphism_oracle(a, f, b, fmt: str = ATOMIC, stage: int | None = None) -> frozenset[int]:
    return join([encode_diagram(a, fmt, stage), graph_codes(f), encode_diagram(b, fmt, stage)], 3)


def _total(ones: frozenset[int], phi) -> TotalOracle:
    top = max(max(ones, default=-1), getattr(phi, "max_position", -1))
    return TotalOracle(ones, top + 1)


def _stage(*ops) -> int:
    return max(getattr(op, "final_stage", 0) for op in ops)


def sweep_star(phi_star, psi_star, pairs, input_bound: int = 64,
               fmt: str = ATOMIC) -> SweepResult:
    """Compare ``{<x, y> : phi_star(x) = y}`` with ``psi_star``'s output, ``x < input_bound``."""
    res = SweepResult()
    stage = _stage(phi_star, psi_star)
    for a, f, b in pairs:
        ones = morphism_oracle(a, f, b, fmt)
        total = _total(ones, phi_star)
        want = {}
        for x in range(input_bound):
            y = phi_star.evaluate(total, x, stage)
            if y is not None:
                want[x] = y
        got: dict[int, set[int]] = {}
        for c in psi_star.apply(ones, stage):
            x, y = cantor_unpair(c)
            if x < input_bound:
                got.setdefault(x, set()).add(y)
        res.oracles += 1
        res.comparisons += input_bound
        for x in range(input_bound):
            lhs = {want[x]} if x in want else set()
            rhs = got.get(x, set())
            if lhs != rhs:
                res.mismatches.append({"structure_size": a.universe_bound, "map": f,
                                       "input": x, "functional": sorted(lhs),
                                       "operator": sorted(rhs)})
                break
    return res


def in_window_atoms(lang: RelationalLanguage, n: int, input_bound: int) -> list[int]:
    """Atomic-diagram codes below ``input_bound`` whose arguments lie in ``[0, n)``."""
    codes = []
    for i in range(len(lang)):
        for t in lang.tuples(i, n):
            c = 2 * lang.atom_code(i, t)
            codes.extend(x for x in (c, c + 1) if x < input_bound)
    return sorted(codes)


def sweep_diagram(phi, psi, structures, out_lang: RelationalLanguage,
                  input_bound: int = 128) -> SweepResult:
    """Compare ``phi(x) = 1`` with ``x`` in ``psi``'s output over ``D(A)``."""
    res = SweepResult()
    stage = _stage(phi, psi)
    for a in structures:
        ones = encode_diagram(a, ATOMIC)
        total = _total(ones, phi)
        out = psi.apply(ones, stage)
        res.oracles += 1
        for x in in_window_atoms(out_lang, a.universe_bound, input_bound):
            res.comparisons += 1
            lhs = phi.evaluate(total, x, stage) == 1
            if lhs != (x in out):
                res.mismatches.append({"structure_size": a.universe_bound, "input": x,
                                       "functional": lhs, "operator": x in out})
                break
    return res


def sweep_functionals(phi, other, structures, out_lang: RelationalLanguage,
                      input_bound: int = 128) -> SweepResult:
    """Compare two functionals value by value on the in-window atoms over ``D(A)``."""
    res = SweepResult()
    stage = _stage(phi, other)
    for a in structures:
        ones = encode_diagram(a, ATOMIC)
        t1, t2 = _total(ones, phi), _total(ones, other)
        res.oracles += 1
        for x in in_window_atoms(out_lang, a.universe_bound, input_bound):
            res.comparisons += 1
            u, v = phi.evaluate(t1, x, stage), other.evaluate(t2, x, stage)
            if u != v:
                res.mismatches.append({"structure_size": a.universe_bound, "input": x,
                                       "first": u, "second": v})
                break
    return res
