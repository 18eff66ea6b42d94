import pytest

from posfunctor.diagrams import CESchedule, Enumeration
from posfunctor.errors import ParseError
from posfunctor.fileformats import (
    format_bundle,
    format_enumeration,
    format_schedule,
    format_structure,
    parse_bundle,
    parse_enumeration,
    parse_schedule,
    parse_structure,
)
from posfunctor.gallery import DEFAULT_SCHEDULE, build_categoricity_graph, build_successor, functor_drop_K


@pytest.mark.parametrize("s", [
    build_successor("with-K", DEFAULT_SCHEDULE, 6),
    build_successor("plain", DEFAULT_SCHEDULE, 3),
    build_categoricity_graph("B1", DEFAULT_SCHEDULE, 3),
])
def test_structure_round_trip(s):
    assert parse_structure(format_structure(s)) == s


def test_structure_text():
    s = parse_structure("language 2\nuniverse 2  # two points\nfact 0 (0,1) @3\nelement 1 @2\n")
    assert s.universe_bound == 2
    assert s.relation(0) == {(0, 1)}
    assert s.relation(0, 2) == frozenset()
    assert s.element_stages == (0, 2)


@pytest.mark.parametrize("text,line", [
    ("language 2\nuniverse 2\nfact 0 (0,x) @0\n", 3),
    ("language 2\nuniverse two\n", 2),
    ("language 2\nuniverse 2\nwhatever 3\n", 3),
    ("language 2\nuniverse 2\nelement 3\n", 3),
])
def test_structure_errors_carry_lines(text, line):
    with pytest.raises(ParseError) as info:
        parse_structure(text)
    assert info.value.line == line


def test_structure_needs_header():
    with pytest.raises(ParseError):
        parse_structure("universe 2\n")


def test_enumeration_round_trip():
    f = Enumeration((2, 0, 1, 1))
    assert parse_enumeration(format_enumeration(f)) == f
    with pytest.raises(ParseError) as info:
        parse_enumeration("0 -> 1\n0 -> 2\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_enumeration("1 -> 0\n")


def test_schedule_round_trip():
    assert parse_schedule(format_schedule(DEFAULT_SCHEDULE)) == DEFAULT_SCHEDULE
    assert parse_schedule("# nothing\n") == CESchedule(())
    with pytest.raises(ParseError) as info:
        parse_schedule("1 @0\n1 @3\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_schedule("1 at 0\n")


def test_bundle_round_trip():
    F = functor_drop_K(3)
    G = parse_bundle(format_bundle(F))
    assert G.kind == F.kind and G.source.arities == F.source.arities
    assert G.object_part.axioms == F.object_part.axioms
    assert G.morphism_part.axioms == F.morphism_part.axioms


@pytest.mark.parametrize("text,line", [
    ("kind sideways\n", 1),
    ("kind enumerable\nsource 2\ntarget 2\nobject:\nenum {1} -> \nmorphism:\n", 5),
    ("kind enumerable\nsource 2\ntarget 2\nobject:\nobject:\n", 5),
    ("kind enumerable\nsource 2,q\n", 2),
])
def test_bundle_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_bundle(text)
    assert info.value.line == line


def test_bundle_kind_mismatch():
    text = "kind computable\nsource 2\ntarget 2\nobject:\nenum {} -> 1\nmorphism:\nenum {} -> 1\n"
    with pytest.raises(ParseError):
        parse_bundle(text)
