"""Line-oriented text format for operator listings.

::

    # comment
    enum {2,4} -> 7 @3
    turing [10:1, 11:0] 4 -> 1 @0

The ``@stage`` suffix is optional and defaults to 0.  A file holds axioms of
one species only.
"""
from __future__ import annotations

import re
from typing import Iterable

from .errors import ParseError
from .machines import EnumAxiom, EnumOperator, QueryAxiom, TuringFunctional

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<word>[A-Za-z_][\w-]*)|(?P<arrow>->)|(?P<punct>[{}\[\],:@]))")


class _Line:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        stripped_end = len(text.rstrip())
        while pos < stripped_end:
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
                raise ParseError(f"unexpected character {text[col - 1]!r}", lineno, col)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        col = tok[2] if tok else len(self.text.rstrip()) + 1
        return ParseError(message, self.lineno, col)

    def take(self, kind: str, value: str | None = None) -> str:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = "end of line" if tok is None else repr(tok[1])
            raise self.error(f"expected {want}, got {got}")
        self.i += 1
        return tok[1]

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[1] == value

    def done(self) -> None:
        if self.peek() is not None:
            raise self.error(f"unexpected trailing {self.peek()[1]!r}")


def _stage(line: _Line) -> int:
    if line.at("@"):
        line.take("punct", "@")
        return int(line.take("int"))
    return 0


def _enum_axiom(line: _Line) -> EnumAxiom:
    line.take("punct", "{")
    premise = []
    if not line.at("}"):
        premise.append(int(line.take("int")))
        while line.at(","):
            line.take("punct", ",")
            premise.append(int(line.take("int")))
    line.take("punct", "}")
    line.take("arrow")
    conclusion = int(line.take("int"))
    stage = _stage(line)
    line.done()
    return EnumAxiom(frozenset(premise), conclusion, stage)


def _query_axiom(line: _Line) -> QueryAxiom:
    line.take("punct", "[")
    queries: dict[int, int] = {}

    def entry():
        tok = line.peek()
        pos = int(line.take("int"))
        line.take("punct", ":")
        bit_tok = line.peek()
        bit = int(line.take("int"))
        if bit not in (0, 1):
            raise ParseError("query answer must be 0 or 1", line.lineno, bit_tok[2])
        if pos in queries:
            raise ParseError(f"position {pos} queried twice", line.lineno, tok[2])
        queries[pos] = bit

    if not line.at("]"):
        entry()
        while line.at(","):
            line.take("punct", ",")
            entry()
    line.take("punct", "]")
    x = int(line.take("int"))
    line.take("arrow")
    y = int(line.take("int"))
    stage = _stage(line)
    line.done()
    return QueryAxiom(tuple(queries.items()), x, y, stage)


def parse_axiom_lines(lines: Iterable[tuple[int, str]]) -> list:
    """Parse ``(lineno, text)`` pairs into axioms; blank and ``#`` lines are skipped."""
    axioms = []
    for lineno, text in lines:
        if not text.strip() or text.lstrip().startswith("#"):
            continue
        line = _Line(text, lineno)
        head = line.peek()
        if head is None or head[0] != "word" or head[1] not in ("enum", "turing"):
            raise line.error("expected 'enum' or 'turing'")
        line.take("word")
        axioms.append(_enum_axiom(line) if head[1] == "enum" else _query_axiom(line))
    return axioms


def build_operator(axioms: list, name: str = "", lineno: int = 1):
    kinds = {type(ax) for ax in axioms}
    if len(kinds) > 1:
        raise ParseError("enum and turing axioms mixed in one operator", lineno, 1)
    if kinds == {QueryAxiom}:
        return TuringFunctional(tuple(axioms), name)
    return EnumOperator(tuple(axioms), name)


def parse_operator(text: str, name: str = ""):
    """Parse a whole listing into an :class:`EnumOperator` or :class:`TuringFunctional`."""
    axioms = parse_axiom_lines(enumerate(text.splitlines(), start=1))
    return build_operator(axioms, name)


def format_axiom(ax) -> str:
    if isinstance(ax, EnumAxiom):
        premise = ",".join(str(c) for c in sorted(ax.premise))
        return f"enum {{{premise}}} -> {ax.conclusion} @{ax.stage}"
    queries = ", ".join(f"{p}:{b}" for p, b in ax.queries)
    return f"turing [{queries}] {ax.input} -> {ax.output} @{ax.stage}"


def format_operator(op, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.extend(format_axiom(ax) for ax in op.axioms)
    return "\n".join(lines) + "\n"
