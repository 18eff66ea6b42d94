"""Effectivized functors and checkers for functor laws and (pseudo-)inverses.

All checks are window-exact: they quantify over the explored window of each
sampled structure and demand equality there.  Violations are returned as
data in a :class:`LawReport`; only malformed witnesses raise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .coding import cantor_pair, cantor_unpair, graph_codes, join
from .diagrams import (
    ATOMIC,
    FORMATS,
    POSITIVE,
    RelationalLanguage,
    StructurePresentation,
    decode_diagram,
    encode_diagram,
    is_isomorphism,
)
from .errors import DecodeError, IllFormedFunctor, KindError, WitnessMalformed
from .machines import (
    ENUMERATION_SPECIES,
    TURING_SPECIES,
    ComputedFunctional,
    RuleOperator,
    TotalOracle,
    TuringFunctional,
)

KINDS = {
    "computable": ("turing", "turing", ATOMIC),
    "enumerable": ("enumeration", "enumeration", ATOMIC),
    "star-enumerable": ("enumeration", "turing", ATOMIC),
    "positive-enumerable": ("enumeration", "enumeration", POSITIVE),
    "positive-star-enumerable": ("enumeration", "turing", POSITIVE),
}

IsoGraph = dict[int, int]


def species(op) -> str:
    if isinstance(op, ENUMERATION_SPECIES):
        return "enumeration"
    if isinstance(op, TURING_SPECIES):
        return "turing"
    raise KindError(f"{type(op).__name__} is neither an enumeration operator nor a functional")


def _total_oracle(ones: frozenset[int], op) -> TotalOracle:
    top = max(max(ones, default=-1), getattr(op, "max_position", -1))
    return TotalOracle(ones, top + 1)


def _stage(s: StructurePresentation, stage: int | None) -> int:
    return s.final_stage if stage is None else stage


def _encode(s: StructurePresentation, fmt: str, stage: int | None) -> frozenset[int]:
    if fmt == ATOMIC:
        s.check_total(stage)
    return encode_diagram(s, fmt, stage)


def _as_injection(pairs: Iterable[tuple[int, int]], what: str) -> IsoGraph:
    g: IsoGraph = {}
    for x, y in pairs:
        if g.get(x, y) != y:
            raise IllFormedFunctor(f"{what} sends {x} to both {g[x]} and {y}")
        g[x] = y
    if len(set(g.values())) != len(g):
        raise IllFormedFunctor(f"{what} is not injective")
    return g


@dataclass(frozen=True)
class EffectivizedFunctor:
    kind: str
    object_part: Any
    morphism_part: Any
    oracle_format: str
    source: RelationalLanguage
    target: RelationalLanguage
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise KindError(f"unknown functor kind {self.kind!r}")
        obj, mor, fmt = KINDS[self.kind]
        if species(self.object_part) != obj or species(self.morphism_part) != mor:
            raise KindError(f"{self.kind} functors need a {obj} object part and a {mor} "
                            f"morphism part")
        if self.oracle_format != fmt:
            raise KindError(f"{self.kind} functors read {fmt} diagrams, not {self.oracle_format}")
        if species(self.object_part) == "turing" and not isinstance(self.object_part,
                                                                    TuringFunctional):
            raise KindError("Turing object parts must be explicit functionals")

    def object_map(self, s: StructurePresentation, stage: int | None = None) -> StructurePresentation:
        st = _stage(s, stage)
        ones = _encode(s, self.oracle_format, st)
        op = self.object_part
        if species(op) == "enumeration":
            out = op.apply(ones, st)
        else:
            total = _total_oracle(ones, op)
            out = {x for x in op.inputs(st) if op.evaluate(total, x, st) == 1}
        try:
            return decode_diagram(out, self.target, self.oracle_format)
        except DecodeError as exc:
            raise IllFormedFunctor(f"{self.name or self.kind}: output is not a diagram: {exc}") from exc

    def morphism_map(self, a: StructurePresentation, f: Mapping[int, int],
                     b: StructurePresentation, stage: int | None = None) -> IsoGraph:
        st = _stage(a, stage)
        ones = join([_encode(a, self.oracle_format, st), graph_codes(dict(f)),
                     _encode(b, self.oracle_format, st)], 3)
        op = self.morphism_part
        if species(op) == "enumeration":
            pairs = [cantor_unpair(c) for c in op.apply(ones, st)]
        else:
            total = _total_oracle(ones, op)
            n = self.object_map(a, st).universe_bound
            pairs = []
            for x in range(n):
                y = op.evaluate(total, x, st)
                if y is not None:
                    pairs.append((x, y))
        return _as_injection(pairs, f"{self.name or self.kind} morphism")


@dataclass(frozen=True)
class ComposedFunctor:
    """``outer . inner``, evaluated one functor after the other."""

    outer: Any
    inner: Any

    @property
    def source(self):
        return self.inner.source

    @property
    def target(self):
        return self.outer.target

    @property
    def oracle_format(self):
        return self.inner.oracle_format

    @property
    def name(self):
        return f"{getattr(self.outer, 'name', '?')}∘{getattr(self.inner, 'name', '?')}"

    def object_map(self, s, stage=None):
        st = _stage(s, stage)
        return self.outer.object_map(self.inner.object_map(s, st), st)

    def morphism_map(self, a, f, b, stage=None):
        st = _stage(a, stage)
        fa, fb = self.inner.object_map(a, st), self.inner.object_map(b, st)
        return self.outer.morphism_map(fa, self.inner.morphism_map(a, f, b, st), fb, st)


def compose(outer, inner) -> ComposedFunctor:
    return ComposedFunctor(outer, inner)


def _copy_rule(name: str) -> RuleOperator:
    return RuleOperator(lambda elements, stage: {c: frozenset({c}) for c in elements}, name)


def _graph_rule(name: str) -> RuleOperator:
    return RuleOperator(
        lambda elements, stage: {c // 3: frozenset({c}) for c in elements if c % 3 == 1}, name)


def identity_functor(language: RelationalLanguage, fmt: str = POSITIVE) -> EffectivizedFunctor:
    """Object part copies its oracle verbatim, morphism part copies the graph column."""
    kind = "positive-enumerable" if fmt == POSITIVE else "enumerable"
    return EffectivizedFunctor(kind, _copy_rule("copy"), _graph_rule("graph-copy"), fmt,
                               language, language, "id")


def apply_object(F, s: StructurePresentation, stage: int | None = None) -> StructurePresentation:
    return F.object_map(s, stage)


def apply_morphism(F, a: StructurePresentation, f: Mapping[int, int],
                   b: StructurePresentation, stage: int | None = None) -> IsoGraph:
    return F.morphism_map(a, f, b, stage)


@dataclass(frozen=True)
class IsoWitness:
    operator: Any
    format: str

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        species(self.operator)

    def evaluate(self, s: StructurePresentation, domain_size: int,
                 codomain_size: int, stage: int | None = None) -> IsoGraph:
        """The map read off the witness on ``s``; must be a bijection of the windows."""
        st = _stage(s, stage)
        ones = _encode(s, self.format, st)
        op = self.operator
        if species(op) == "enumeration":
            pairs = [cantor_unpair(c) for c in op.apply(ones, st)]
        else:
            total = _total_oracle(ones, op)
            pairs = [(x, op.evaluate(total, x, st)) for x in range(domain_size)]
        g: IsoGraph = {}
        for x, y in pairs:
            if y is None or g.get(x, y) != y:
                raise WitnessMalformed(f"witness output at {x} is not a single value")
            g[x] = y
        if (sorted(g) != list(range(domain_size))
                or sorted(g.values()) != list(range(codomain_size))):
            raise WitnessMalformed(
                f"witness is not a bijection [0, {domain_size}) -> [0, {codomain_size})")
        return g


def identity_witness(fmt: str = POSITIVE) -> IsoWitness:
    """``x -> x``, read off the equality column (positive) or computed outright (atomic)."""
    if fmt == POSITIVE:
        def derive(elements, stage):
            out = {}
            for c in elements:
                if c % 3 == 0:
                    x, y = cantor_unpair(c // 3)
                    if x == y:
                        out[c // 3] = frozenset({c})
            return out
        return IsoWitness(RuleOperator(derive, "id-witness"), POSITIVE)
    return IsoWitness(ComputedFunctional(lambda oracle, x, stage: x, "id-witness"), ATOMIC)


def swapped_witness(witness: IsoWitness, x: int, y: int) -> IsoWitness:
    """``witness`` with the outputs at ``x`` and ``y`` exchanged (negative controls)."""
    op = witness.operator

    def swap(u):
        return y if u == x else x if u == y else u

    if species(op) == "enumeration":
        def derive(elements, stage):
            out = {}
            for c in op.apply(elements, stage):
                u, v = cantor_unpair(c)
                out[cantor_pair(swap(u), v)] = op.witness(elements, c, stage)
            return out
        return IsoWitness(RuleOperator(derive, "swapped"), witness.format)

    def fn(oracle, u, stage):
        return op.evaluate(oracle, swap(u), stage)
    return IsoWitness(ComputedFunctional(fn, "swapped"), witness.format)


@dataclass
class LawReport:
    check: str
    cases: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, **witness) -> None:
        self.violations.append(witness)

    def to_dict(self) -> dict:
        return {"check": self.check, "cases": self.cases, "ok": self.ok,
                "violations": self.violations}


def check_functor_laws(F, samples, stage: int | None = None) -> LawReport:
    """``F(id) = id`` and ``F(g . f) = F(g) . F(f)`` on samples ``(a, f, b, g, c)``."""
    report = LawReport("functor-laws")
    for k, (a, f, b, g, c) in enumerate(samples):
        report.cases += 1
        fa = F.object_map(a, stage)
        ident = {x: x for x in range(a.universe_size(stage))}
        got = F.morphism_map(a, ident, a, stage)
        want = {x: x for x in range(fa.universe_bound)}
        if got != want:
            bad = min(x for x in set(got) | set(want) if got.get(x) != want.get(x))
            report.add(sample=k, law="identity", element=bad, got=got.get(bad), want=bad)
        gf = {x: g[f[x]] for x in f}
        lhs = F.morphism_map(a, gf, c, stage)
        ff, fg = F.morphism_map(a, f, b, stage), F.morphism_map(b, g, c, stage)
        rhs = {x: fg[y] for x, y in ff.items() if y in fg}
        if lhs != rhs:
            bad = min(x for x in set(lhs) | set(rhs) if lhs.get(x) != rhs.get(x))
            report.add(sample=k, law="composition", element=bad, got=lhs.get(bad),
                       want=rhs.get(bad))
    return report


def check_effective_isomorphism(F, G, witness: IsoWitness, samples,
                                stage: int | None = None) -> LawReport:
    """``Lambda^A : F(A) -> G(A)`` is an isomorphism and ``Lambda^B . F(h) = G(h) . Lambda^A``."""
    report = LawReport(f"iso[{getattr(F, 'name', 'F')} ~ {getattr(G, 'name', 'G')}]")
    for k, (a, h, b) in enumerate(samples):
        report.cases += 1
        fa, ga = F.object_map(a, stage), G.object_map(a, stage)
        fb, gb = F.object_map(b, stage), G.object_map(b, stage)
        lam_a = witness.evaluate(a, fa.universe_bound, ga.universe_bound, stage)
        lam_b = witness.evaluate(b, fb.universe_bound, gb.universe_bound, stage)
        for which, lam, src, dst in (("A", lam_a, fa, ga), ("B", lam_b, fb, gb)):
            if not is_isomorphism(lam, src, dst):
                report.add(sample=k, condition="isomorphism", structure=which)
        fh, gh = F.morphism_map(a, h, b, stage), G.morphism_map(a, h, b, stage)
        for x in range(fa.universe_bound):
            lhs = lam_b.get(fh.get(x)) if x in fh else None
            rhs = gh.get(lam_a[x])
            if lhs is None or lhs != rhs:
                report.add(sample=k, condition="commutes", element=x, got=lhs, want=rhs)
                break
    return report


def check_pseudo_inverse(F, G, lambda_c: IsoWitness, lambda_d: IsoWitness,
                         samples_c, samples_d, stage: int | None = None) -> dict[str, LawReport]:
    """Both round trips are isomorphic to the identity, plus the two compatibility equations.

    ``samples_c`` are ``(A, h, A')`` triples in the source class of ``F``,
    ``samples_d`` the same for ``G``.
    """
    id_c = identity_functor(F.source, F.oracle_format)
    id_d = identity_functor(G.source, G.oracle_format)
    reports = {
        "GF~id": check_effective_isomorphism(compose(G, F), id_c, lambda_c, samples_c, stage),
        "FG~id": check_effective_isomorphism(compose(F, G), id_d, lambda_d, samples_d, stage),
    }
    # Lambda_D^{F(A)} = F(Lambda_C^A) as maps F(G(F(A))) -> F(A)
    eq_c = LawReport("compatibility-C")
    for k, (a, _, _) in enumerate(samples_c):
        eq_c.cases += 1
        st = _stage(a, stage)
        fa = F.object_map(a, st)
        gfa = G.object_map(fa, st)
        fgfa = F.object_map(gfa, st)
        lam_c = lambda_c.evaluate(a, gfa.universe_bound, a.universe_size(st), st)
        lhs = lambda_d.evaluate(fa, fgfa.universe_bound, fa.universe_bound, st)
        rhs = F.morphism_map(gfa, lam_c, a, st)
        _compare(eq_c, k, lhs, rhs)
    eq_d = LawReport("compatibility-D")
    for k, (b, _, _) in enumerate(samples_d):
        eq_d.cases += 1
        st = _stage(b, stage)
        gb = G.object_map(b, st)
        fgb = F.object_map(gb, st)
        gfgb = G.object_map(fgb, st)
        lam_d = lambda_d.evaluate(b, fgb.universe_bound, b.universe_size(st), st)
        lhs = lambda_c.evaluate(gb, gfgb.universe_bound, gb.universe_bound, st)
        rhs = G.morphism_map(fgb, lam_d, b, st)
        _compare(eq_d, k, lhs, rhs)
    reports["compatibility-C"] = eq_c
    reports["compatibility-D"] = eq_d
    return reports


def _compare(report: LawReport, k: int, lhs: IsoGraph, rhs: IsoGraph) -> None:
    if lhs != rhs:
        bad = min(x for x in set(lhs) | set(rhs) if lhs.get(x) != rhs.get(x))
        report.add(sample=k, element=bad, witness=lhs.get(bad), functor_image=rhs.get(bad))
