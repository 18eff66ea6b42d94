"""Text formats for structures, enumerations, schedules and functor bundles.

Structure files::

    language 1,2,1
    names Zero,S,K          # optional
    universe 5
    total                   # optional
    fact 0 (0) @0
    negfact 2 (1) @0
    element 3 @2            # optional per-element stage

Enumeration files hold ``x -> y`` lines, schedule files ``element @stage``.
A functor bundle is ``kind``, ``source`` and ``target`` lines followed by an
``object:`` and a ``morphism:`` block of operator axioms.  ``#`` starts a
comment everywhere.
"""
from __future__ import annotations

import re
from typing import Iterable

from .diagrams import CESchedule, Enumeration, RelationalLanguage, StructurePresentation
from .errors import KindError, ParseError
from .functors import KINDS, EffectivizedFunctor
from .opformat import build_operator, format_operator, parse_axiom_lines


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for k, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield k, line


def _ints(s: str, lineno: int, line: str) -> tuple[int, ...]:
    s = s.strip()
    if not s:
        return ()
    try:
        return tuple(int(p) for p in s.split(","))
    except ValueError:
        raise ParseError(f"expected comma-separated naturals, got {s!r}", lineno,
                         line.find(s) + 1) from None


_FACT = re.compile(r"^\s*(fact|negfact)\s+(\d+)\s*\(([\d,\s]*)\)\s*(?:@\s*(\d+))?\s*$")
_KV = re.compile(r"^\s*(\w+)\s*(.*)$")


def parse_structure(text: str) -> StructurePresentation:
    arities = names = None
    universe = None
    total = False
    facts, neg, stages = set(), set(), {}
    for lineno, line in _lines(text):
        m = _FACT.match(line)
        if m:
            kind, i, args, st = m.groups()
            (facts if kind == "fact" else neg).add(
                (int(i), _ints(args, lineno, line), int(st or 0)))
            continue
        key, rest = _KV.match(line).groups()
        if key == "language":
            arities = _ints(rest, lineno, line)
        elif key == "names":
            names = tuple(p.strip() for p in rest.split(","))
        elif key == "universe":
            vals = rest.replace("@", " ").split()
            if len(vals) != 1 or not vals[0].isdigit():
                raise ParseError("expected 'universe N'", lineno, 1)
            universe = int(vals[0])
        elif key == "total" and not rest.strip():
            total = True
        elif key == "element":
            m2 = re.match(r"^(\d+)\s*@\s*(\d+)$", rest.strip())
            if not m2:
                raise ParseError("expected 'element x @stage'", lineno, 1)
            stages[int(m2[1])] = int(m2[2])
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, line.find(key) + 1)
    if arities is None or universe is None:
        raise ParseError("structure file needs 'language' and 'universe' lines", 1, 1)
    lang = RelationalLanguage(arities, names or ())
    es = tuple(stages.get(x, 0) for x in range(universe)) if stages else ()
    try:
        return StructurePresentation(lang, universe, frozenset(facts), frozenset(neg), total, es)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from exc


def format_structure(s: StructurePresentation) -> str:
    out = [f"language {','.join(map(str, s.language.arities))}",
           f"names {','.join(s.language.names)}",
           f"universe {s.universe_bound}"]
    if s.total:
        out.append("total")
    for x, st in enumerate(s.element_stages):
        if st:
            out.append(f"element {x} @{st}")
    for tag, facts in (("fact", s.facts), ("negfact", s.negative_facts)):
        for i, args, st in sorted(facts, key=lambda f: (f[2], f[0], f[1])):
            out.append(f"{tag} {i} ({','.join(map(str, args))}) @{st}")
    return "\n".join(out) + "\n"


def parse_enumeration(text: str, partial: bool = False) -> Enumeration:
    pairs = {}
    for lineno, line in _lines(text):
        m = re.match(r"^\s*(\d+)\s*->\s*(\d+)\s*$", line)
        if not m:
            raise ParseError("expected 'x -> y'", lineno, 1)
        x, y = int(m[1]), int(m[2])
        if x in pairs:
            raise ParseError(f"element {x} mapped twice", lineno, 1)
        pairs[x] = y
    if sorted(pairs) != list(range(len(pairs))):
        raise ParseError("enumeration domain must be an initial segment", 1, 1)
    try:
        return Enumeration(tuple(pairs[x] for x in range(len(pairs))), partial)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from exc


def format_enumeration(f: Enumeration) -> str:
    return "".join(f"{x} -> {y}\n" for x, y in enumerate(f.values))


def parse_schedule(text: str) -> CESchedule:
    entries = []
    seen = set()
    for lineno, line in _lines(text):
        m = re.match(r"^\s*(\d+)\s*@\s*(\d+)\s*$", line)
        if not m:
            raise ParseError("expected 'element @stage'", lineno, 1)
        x = int(m[1])
        if x in seen:
            raise ParseError(f"element {x} scheduled twice", lineno, 1)
        seen.add(x)
        entries.append((x, int(m[2])))
    return CESchedule(tuple(entries))


def format_schedule(schedule: CESchedule) -> str:
    return "".join(f"{x} @{s}\n" for x, s in schedule.entries)


def parse_bundle(text: str, name: str = "") -> EffectivizedFunctor:
    kind = source = target = None
    blocks: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, line in _lines(text):
        stripped = line.strip()
        if stripped in ("object:", "morphism:"):
            current = stripped[:-1]
            if current in blocks:
                raise ParseError(f"duplicate {current} block", lineno, 1)
            blocks[current] = []
            continue
        if current is not None:
            blocks[current].append((lineno, line))
            continue
        key, rest = _KV.match(line).groups()
        if key == "kind":
            kind = rest.strip()
            if kind not in KINDS:
                raise ParseError(f"unknown functor kind {kind!r}", lineno, line.find(kind) + 1)
        elif key in ("source", "target"):
            lang = RelationalLanguage(_ints(rest, lineno, line))
            if key == "source":
                source = lang
            else:
                target = lang
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, line.find(key) + 1)
    if kind is None or source is None or target is None:
        raise ParseError("bundle needs 'kind', 'source' and 'target' lines", 1, 1)
    parts = []
    for part in ("object", "morphism"):
        if part not in blocks:
            raise ParseError(f"bundle has no {part} block", 1, 1)
        lines = blocks[part]
        parts.append(build_operator(parse_axiom_lines(lines), f"{name}:{part}",
                                    lines[0][0] if lines else 1))
    try:
        return EffectivizedFunctor(kind, parts[0], parts[1], KINDS[kind][2], source, target,
                                   name)
    except KindError as exc:
        raise ParseError(str(exc), 1, 1) from exc


def format_bundle(F: EffectivizedFunctor) -> str:
    head = [f"kind {F.kind}",
            f"source {','.join(map(str, F.source.arities))}",
            f"target {','.join(map(str, F.target.arities))}", "object:"]
    return ("\n".join(head) + "\n" + format_operator(F.object_part) + "morphism:\n"
            + format_operator(F.morphism_part))
