"""Enumeration operators and Turing functionals over coded oracles.

Both machine species are stage-indexed: an axiom listed at stage ``s`` is
available from stage ``s`` on.  Divergence is "no axiom fired within the
stage budget" and is reported as ``None``.

Besides explicit axiom listings each species has a procedural form
(:class:`RuleOperator`, :class:`ComputedFunctional`) for operators whose
listing is infinite, such as the ones that follow paths in a structure.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Mapping, Union

from .errors import FunctionalInconsistency, InsufficientOracle


@dataclass(frozen=True)
class EnumAxiom:
    premise: frozenset[int]
    conclusion: int
    stage: int = 0

    def __post_init__(self):
        object.__setattr__(self, "premise", frozenset(self.premise))


@dataclass(frozen=True)
class EnumOracle:
    """Enumeration-form oracle: ``(code, stage)`` entries, monotone in stage."""

    entries: tuple[tuple[int, int], ...]

    @classmethod
    def from_set(cls, codes: Iterable[int], stage: int = 0) -> "EnumOracle":
        return cls(tuple((c, stage) for c in sorted(set(codes))))

    def at(self, stage: int) -> frozenset[int]:
        return frozenset(c for c, s in self.entries if s <= stage)

    @property
    def final_stage(self) -> int:
        return max((s for _, s in self.entries), default=0)


@dataclass(frozen=True)
class TotalOracle:
    """Total-assignment oracle: characteristic function of ``ones`` on ``[0, window)``."""

    ones: frozenset[int]
    window: int

    @classmethod
    def from_set(cls, ones: Iterable[int], window: int | None = None) -> "TotalOracle":
        ones = frozenset(ones)
        if window is None:
            window = max(ones, default=-1) + 1
        return cls(ones, window)

    def __contains__(self, position: int) -> bool:
        return 0 <= position < self.window

    def bit(self, position: int) -> int:
        if position not in self:
            raise InsufficientOracle(f"position {position} outside oracle window [0, {self.window})")
        return int(position in self.ones)


OracleLike = Union[EnumOracle, TotalOracle, frozenset, set]


def _elements(oracle: OracleLike, stage: int) -> frozenset[int]:
    if isinstance(oracle, EnumOracle):
        return oracle.at(stage)
    if isinstance(oracle, TotalOracle):
        return frozenset(c for c in oracle.ones if c < oracle.window)
    return frozenset(oracle)


@dataclass(frozen=True)
class EnumOperator:
    axioms: tuple[EnumAxiom, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))

    def available(self, stage: int) -> list[EnumAxiom]:
        return [ax for ax in self.axioms if ax.stage <= stage]

    @property
    def final_stage(self) -> int:
        return max((ax.stage for ax in self.axioms), default=0)

    @cached_property
    def _by_trigger(self) -> dict[int | None, list[EnumAxiom]]:
        # each axiom is filed under its least premise element; None for empty premises
        index: dict[int | None, list[EnumAxiom]] = defaultdict(list)
        for ax in self.axioms:
            index[min(ax.premise) if ax.premise else None].append(ax)
        return index

    def _fired(self, elements: frozenset[int], stage: int):
        index = self._by_trigger
        keys = [None] + sorted(k for k in index if k is not None and k in elements)
        for key in keys:
            for ax in index.get(key, ()):
                if ax.stage <= stage and ax.premise <= elements:
                    yield ax

    def apply(self, elements: frozenset[int], stage: int) -> frozenset[int]:
        return frozenset(ax.conclusion for ax in self._fired(elements, stage))

    def witness(self, elements: frozenset[int], code: int, stage: int) -> frozenset[int] | None:
        for ax in self._fired(elements, stage):
            if ax.conclusion == code:
                return ax.premise
        return None


Derivation = Callable[[frozenset, int], Mapping[int, frozenset]]


@dataclass(frozen=True)
class RuleOperator:
    """Enumeration operator given by a derivation procedure.

    ``derive(elements, stage)`` returns every conclusion together with one
    finite premise contained in ``elements`` that yields it.  Implementations
    must be monotone in both arguments; :func:`check_monotone` and
    :func:`check_compact` test that contract.
    """

    derive: Derivation = field(compare=False)
    name: str = ""
    final_stage: int = 0

    _memo: dict = field(default_factory=dict, compare=False, repr=False, init=False)

    def _derived(self, elements: frozenset[int], stage: int) -> Mapping[int, frozenset]:
        # witness() is called once per output code, so keep the last few derivations
        key = (elements, stage)
        if key not in self._memo:
            if len(self._memo) >= 8:
                self._memo.clear()
            self._memo[key] = self.derive(elements, stage)
        return self._memo[key]

    def apply(self, elements: frozenset[int], stage: int) -> frozenset[int]:
        return frozenset(self._derived(frozenset(elements), stage))

    def witness(self, elements: frozenset[int], code: int, stage: int) -> frozenset[int] | None:
        premise = self._derived(frozenset(elements), stage).get(code)
        return None if premise is None else frozenset(premise)


@dataclass(frozen=True)
class QueryAxiom:
    queries: tuple[tuple[int, int], ...]
    input: int
    output: int
    stage: int = 0

    def __post_init__(self):
        q = self.queries.items() if isinstance(self.queries, Mapping) else self.queries
        q = tuple(sorted(q))
        positions = [p for p, _ in q]
        if len(set(positions)) != len(positions):
            raise ValueError(f"query map lists a position twice: {q}")
        if any(b not in (0, 1) for _, b in q):
            raise ValueError(f"query answers must be 0 or 1: {q}")
        object.__setattr__(self, "queries", q)

    @property
    def query_map(self) -> dict[int, int]:
        return dict(self.queries)

    @property
    def use(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.queries)


def compatible(q1: Mapping[int, int], q2: Mapping[int, int]) -> bool:
    return all(q2.get(p, b) == b for p, b in q1.items())


@dataclass(frozen=True)
class TuringFunctional:
    axioms: tuple[QueryAxiom, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))

    @cached_property
    def by_input(self) -> dict[int, list[QueryAxiom]]:
        index: dict[int, list[QueryAxiom]] = defaultdict(list)
        for ax in self.axioms:
            index[ax.input].append(ax)
        return dict(index)

    @property
    def final_stage(self) -> int:
        return max((ax.stage for ax in self.axioms), default=0)

    @cached_property
    def max_position(self) -> int:
        return max((p for ax in self.axioms for p, _ in ax.queries), default=-1)

    def inputs(self, stage: int | None = None) -> list[int]:
        return sorted(x for x, axs in self.by_input.items()
                      if stage is None or any(ax.stage <= stage for ax in axs))

    def find_inconsistency(self) -> tuple[QueryAxiom, QueryAxiom] | None:
        """Pairwise scan for compatible axioms with equal input and different output."""
        for axs in self.by_input.values():
            for a, b in combinations(axs, 2):
                if a.output != b.output and compatible(a.query_map, b.query_map):
                    return a, b
        return None

    def check_consistent(self) -> None:
        clash = self.find_inconsistency()
        if clash is not None:
            a, b = clash
            raise FunctionalInconsistency(f"axioms {a} and {b} are compatible but disagree")

    def evaluate(self, oracle: TotalOracle, x: int, stage: int) -> int | None:
        fired: list[QueryAxiom] = []
        for ax in self.by_input.get(x, ()):
            if ax.stage > stage:
                continue
            inside = [(p, b) for p, b in ax.queries if p in oracle]
            if not all(oracle.bit(p) == b for p, b in inside):
                continue
            if len(inside) < len(ax.queries):
                missing = [p for p, _ in ax.queries if p not in oracle]
                raise InsufficientOracle(
                    f"axiom for input {x} queries {missing} outside window [0, {oracle.window})")
            fired.append(ax)
        outputs = {ax.output for ax in fired}
        if len(outputs) > 1:
            raise FunctionalInconsistency(
                f"input {x}: fired axioms disagree on output {sorted(outputs)}")
        return outputs.pop() if outputs else None


@dataclass(frozen=True)
class ComputedFunctional:
    """Turing functional given by a procedure ``fn(oracle, x, stage) -> output | None``."""

    fn: Callable[[TotalOracle, int, int], int | None] = field(compare=False)
    name: str = ""
    final_stage: int = 0

    def evaluate(self, oracle: TotalOracle, x: int, stage: int) -> int | None:
        return self.fn(oracle, x, stage)


ENUMERATION_SPECIES = (EnumOperator, RuleOperator)
TURING_SPECIES = (TuringFunctional, ComputedFunctional)


def apply_enum_operator(op, oracle: OracleLike, stage: int) -> frozenset[int]:
    """Conclusions of all axioms available by ``stage`` whose premise is in the oracle."""
    return op.apply(_elements(oracle, stage), stage)


def apply_turing_functional(phi, oracle: TotalOracle, input: int, stage: int) -> int | None:
    """Output of ``phi`` on ``input``, or ``None`` when nothing fires by ``stage``."""
    return phi.evaluate(oracle, input, stage)


def check_monotone(op, smaller: frozenset[int], larger: frozenset[int],
                   stage: int, later: int) -> frozenset[int]:
    """Codes produced from (smaller, stage) but missing from (larger, later)."""
    if not smaller <= larger or stage > later:
        raise ValueError("monotonicity check needs smaller <= larger and stage <= later")
    return op.apply(smaller, stage) - op.apply(larger, later)


def check_compact(op, elements: frozenset[int], stage: int) -> list[int]:
    """Output codes whose extracted premise fails to reproduce them on its own."""
    bad = []
    replayed: dict[frozenset[int], frozenset[int]] = {}
    for code in sorted(op.apply(elements, stage)):
        premise = op.witness(elements, code, stage)
        if premise is None or not premise <= elements:
            bad.append(code)
            continue
        if premise not in replayed:
            replayed[premise] = op.apply(premise, stage)
        if code not in replayed[premise]:
            bad.append(code)
    return bad
