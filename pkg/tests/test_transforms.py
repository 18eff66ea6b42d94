import random

import pytest

from posfunctor.coding import cantor_pair, dual
from posfunctor.diagrams import (
    ATOMIC,
    POSITIVE,
    RelationalLanguage,
    StructurePresentation,
    atomic_diagram,
)
from posfunctor.errors import (
    FormatError,
    FunctionalInconsistency,
    InconsistentDiagram,
    MalformedFunctional,
)
from posfunctor.machines import EnumAxiom, EnumOperator, QueryAxiom, TotalOracle, TuringFunctional
from posfunctor.samples import (
    PAIR_LANGUAGE,
    graph_position,
    random_diagram_functional,
    random_star_functional,
    search_functional,
    two_axiom_functional,
)
from posfunctor.sweeps import (
    iso_pairs,
    structure_family,
    sweep_diagram,
    sweep_functionals,
    sweep_star,
)
from posfunctor.transforms import (
    admissible_maps,
    alpha_string,
    enum_to_star,
    enum_to_turing_diagram,
    qualifies,
    star_to_enum,
    turing_to_enum_diagram,
)

E = RelationalLanguage((2,), ("E",))


@pytest.fixture(scope="module")
def small_pairs():
    return list(iso_pairs(structure_family(PAIR_LANGUAGE, 0, 2, {3: 4})))


def test_alpha_string_examples():
    alpha, tilde = alpha_string({10}, E)
    assert alpha[10] == 1 and alpha[11] == 0 and len(alpha) == 12
    assert all(alpha[x] is None for x in range(10))
    assert tilde.bits == tuple(int(x == 10) for x in range(12))
    assert str(alpha) == "↑" * 10 + "10"
    assert len(alpha_string(set(), E)[0]) == 0
    alpha, _ = alpha_string({1}, E)
    assert (alpha[0], alpha[1], len(alpha)) == (0, 1, 2)


def test_alpha_string_rejects_dual_pairs():
    with pytest.raises(InconsistentDiagram):
        alpha_string({10, 11}, E)


def test_thm2_examples():
    phi = TuringFunctional((QueryAxiom(((10, 1),), 4, 1),))
    psi = turing_to_enum_diagram(phi, E, 64)
    assert [(set(a.premise), a.conclusion) for a in psi.axioms] == [({10}, 4)]
    d = atomic_diagram(StructurePresentation.from_relations(E, 2, {0: [(0, 1)]}))
    assert 4 in psi.apply(d, 0)
    phi0 = TuringFunctional((QueryAxiom(((10, 0),), 4, 1),))
    psi0 = turing_to_enum_diagram(phi0, E, 64)
    assert [set(a.premise) for a in psi0.axioms] == [{11}]
    far = TuringFunctional((QueryAxiom(((500, 1),), 4, 1),))
    assert turing_to_enum_diagram(far, E, 64).axioms == ()


def test_generated_premises_are_consistent_and_least():
    rng = random.Random(5)
    phi = random_diagram_functional(rng, PAIR_LANGUAGE, 3)
    psi = turing_to_enum_diagram(phi, PAIR_LANGUAGE, 1024)
    for ax in psi.axioms:
        assert not any(dual(c) in ax.premise for c in ax.premise)
        # the brute-force predicate accepts the listed premise ...
        assert qualifies(phi, ax.premise, ax.conclusion, PAIR_LANGUAGE)
        # ... and no proper subset of it
        for c in ax.premise:
            assert not qualifies(phi, ax.premise - {c}, ax.conclusion, PAIR_LANGUAGE)


def test_thm2_sweep_small():
    rng = random.Random(2)
    phi = random_diagram_functional(rng, PAIR_LANGUAGE, 3)
    psi = turing_to_enum_diagram(phi, PAIR_LANGUAGE, 1024)
    fam = structure_family(PAIR_LANGUAGE, 0, 2, {3: 6})
    res = sweep_diagram(phi, psi, fam, PAIR_LANGUAGE, 128)
    assert res.ok and res.oracles == len(fam)
    back = enum_to_turing_diagram(psi, PAIR_LANGUAGE, 8)
    assert sweep_functionals(phi, back, fam, PAIR_LANGUAGE, 128).ok


def test_thm2_rejects_inconsistent_functional():
    phi = TuringFunctional((QueryAxiom(((3, 1),), 5, 1), QueryAxiom(((3, 1),), 5, 0)))
    with pytest.raises(FunctionalInconsistency):
        turing_to_enum_diagram(phi, E, 64)


def test_star_to_enum_unconditional_axiom():
    psi = star_to_enum(TuringFunctional((QueryAxiom((), 0, 0),)), E, E, 64)
    assert [(set(a.premise), a.conclusion) for a in psi.axioms] == [(set(), 0)]


def test_star_to_enum_graph_premise():
    phi = TuringFunctional((QueryAxiom(((graph_position(0, 0), 1),), 0, 0),))
    psi = star_to_enum(phi, E, E, 64)
    assert psi.axioms and all(a.premise == {graph_position(0, 0)} for a in psi.axioms)


def test_admissible_maps_side_conditions():
    queries = {(0, 1): 0, (2, 3): 1}
    maps = admissible_maps(queries, 40)
    assert maps
    for tau in maps:
        assert tau[2] == 3
        assert tau[0] not in (1, 3)
        assert cantor_pair(0, tau[0]) < 40
    assert {tau[0] for tau in maps} == {z for z in range(8) if z not in (1, 3)}


def test_star_to_enum_refuses_positive_format():
    with pytest.raises(FormatError):
        star_to_enum(search_functional(2), E, E, 64, oracle_format=POSITIVE)


def test_star_to_enum_rejects_non_atom_queries():
    phi = TuringFunctional((QueryAxiom(((3 * 2 * cantor_pair(5, 0), 1),), 0, 0),))
    with pytest.raises(MalformedFunctional):
        star_to_enum(phi, E, E, 64)


@pytest.mark.parametrize("make", [lambda: search_functional(4), two_axiom_functional,
                                  lambda: random_star_functional(random.Random(1), 4)])
def test_prop1_forward_small(make, small_pairs):
    phi = make()
    psi = star_to_enum(phi, PAIR_LANGUAGE, PAIR_LANGUAGE, 1024)
    assert sweep_star(phi, psi, small_pairs).ok


def test_prop1_backward_small(small_pairs):
    psi = star_to_enum(random_star_functional(random.Random(4), 4), PAIR_LANGUAGE,
                       PAIR_LANGUAGE, 1024)
    phi = enum_to_star(psi, 8)
    phi.check_consistent()
    assert sweep_star(phi, psi, small_pairs).ok


def test_range_readings_differ():
    """Excluding every mentioned value (not just 1-entries) loses outputs."""
    phi = TuringFunctional((QueryAxiom(((graph_position(0, 1), 0),
                                        (graph_position(2, 3), 0)), 0, 0),))
    pairs = list(iso_pairs(structure_family(PAIR_LANGUAGE, 0, 0, {4: 1})))
    ones = star_to_enum(phi, PAIR_LANGUAGE, PAIR_LANGUAGE, 1024, range_reading="ones")
    every = star_to_enum(phi, PAIR_LANGUAGE, PAIR_LANGUAGE, 1024, range_reading="all")
    assert sweep_star(phi, ones, pairs).ok
    res = sweep_star(phi, every, pairs)
    assert not res.ok
    # lost exactly where a 0-queried point maps onto a mentioned value
    assert all({m["map"][0], m["map"][2]} & {1, 3} for m in res.mismatches)


def test_enum_to_star_examples():
    psi = EnumOperator((EnumAxiom(frozenset(), cantor_pair(3, 5)),))
    phi = enum_to_star(psi, 4)
    assert phi.evaluate(TotalOracle(frozenset(), 1), 3, 0) == 5
    psi = EnumOperator((EnumAxiom(frozenset({8}), cantor_pair(0, 0)),))
    phi = enum_to_star(psi, 4)
    assert phi.axioms[0].query_map == {8: 1}
    assert phi.evaluate(TotalOracle(frozenset({8}), 9), 0, 0) == 0
    assert phi.evaluate(TotalOracle(frozenset(), 9), 0, 0) is None
    assert phi.evaluate(TotalOracle(frozenset({8}), 9), 1, 0) is None


def test_enum_to_star_budget():
    psi = EnumOperator((EnumAxiom(frozenset(), cantor_pair(0, 1), 9),))
    assert enum_to_star(psi, 8).axioms == ()
    assert enum_to_star(psi, 9).axioms


def test_enum_to_star_surfaces_clash():
    psi = EnumOperator((EnumAxiom(frozenset({1, 2}), cantor_pair(0, 1)),
                        EnumAxiom(frozenset({1}), cantor_pair(0, 2))))
    with pytest.raises(FunctionalInconsistency):
        enum_to_star(psi, 0)


def test_enum_to_turing_examples():
    psi = EnumOperator((EnumAxiom(frozenset({3}), 10),))
    phi = enum_to_turing_diagram(psi, E, 4)
    assert phi.evaluate(TotalOracle(frozenset({3}), 4), 10, 0) == 1
    assert phi.evaluate(TotalOracle(frozenset({3}), 4), 11, 0) == 0
    assert phi.evaluate(TotalOracle(frozenset(), 4), 10, 0) is None


def test_enum_to_turing_on_positive_oracles():
    """The search construction only ever confirms 1s, so it reads positive joins too."""
    psi = EnumOperator((EnumAxiom(frozenset({2}), cantor_pair(1, 1)),))
    phi = enum_to_star(psi, 0, oracle_format=POSITIVE)
    assert phi.evaluate(TotalOracle(frozenset({2}), 3), 1, 0) == 1
    with pytest.raises(ValueError):
        enum_to_star(psi, 0, oracle_format="other")
    assert ATOMIC != POSITIVE
