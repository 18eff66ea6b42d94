import random

import pytest

from posfunctor.diagrams import ATOMIC, POSITIVE, encode_diagram, transport
from posfunctor.errors import IllFormedFunctor, KindError, WitnessMalformed
from posfunctor.functors import (
    KINDS,
    EffectivizedFunctor,
    IsoWitness,
    check_effective_isomorphism,
    check_functor_laws,
    check_pseudo_inverse,
    compose,
    identity_functor,
    identity_witness,
    swapped_witness,
)
from posfunctor.gallery import (
    DEFAULT_SCHEDULE,
    SUCC_K,
    build_successor,
    functor_add_K,
    functor_drop_K,
    functor_flip,
)
from posfunctor.isomorphism import find_isomorphisms
from posfunctor.machines import ComputedFunctional, EnumOperator, TuringFunctional
from posfunctor.samples import identity_graph_operator

W = 8


def perm(rng, n):
    vals = list(range(n))
    rng.shuffle(vals)
    return dict(enumerate(vals))


def triples(base, count, seed=0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        a = transport(base, perm(rng, base.universe_bound))
        f, g = perm(rng, base.universe_bound), perm(rng, base.universe_bound)
        b = transport(a, f)
        out.append((a, f, b, g, transport(b, g)))
    return out


@pytest.fixture(scope="module")
def with_k():
    return build_successor("with-K", DEFAULT_SCHEDULE, W)


def test_kind_table():
    assert set(KINDS) == {"computable", "enumerable", "star-enumerable",
                          "positive-enumerable", "positive-star-enumerable"}


def test_kind_discipline():
    enum, turing = EnumOperator(()), TuringFunctional(())
    with pytest.raises(KindError):
        EffectivizedFunctor("computable", enum, turing, ATOMIC, SUCC_K, SUCC_K)
    with pytest.raises(KindError):
        EffectivizedFunctor("enumerable", enum, turing, ATOMIC, SUCC_K, SUCC_K)
    with pytest.raises(KindError):
        EffectivizedFunctor("positive-enumerable", enum, enum, ATOMIC, SUCC_K, SUCC_K)
    with pytest.raises(KindError):
        EffectivizedFunctor("nonsense", enum, enum, ATOMIC, SUCC_K, SUCC_K)
    with pytest.raises(KindError):
        EffectivizedFunctor("computable", ComputedFunctional(lambda o, x, s: 0), turing,
                            ATOMIC, SUCC_K, SUCC_K)
    EffectivizedFunctor("star-enumerable", enum, turing, ATOMIC, SUCC_K, SUCC_K)


@pytest.mark.parametrize("fmt", [ATOMIC, POSITIVE])
def test_identity_functor(with_k, fmt):
    F = identity_functor(SUCC_K, fmt)
    assert encode_diagram(F.object_map(with_k), fmt) == encode_diagram(with_k, fmt)
    assert check_functor_laws(F, triples(with_k, 5)).ok
    samples = [t[:3] for t in triples(with_k, 5)]
    assert check_effective_isomorphism(F, F, identity_witness(fmt), samples).ok


def test_flip_laws(with_k):
    flip = functor_flip(W)
    bar = build_successor("with-K-bar", DEFAULT_SCHEDULE, W)
    assert encode_diagram(flip.object_map(with_k), ATOMIC) == encode_diagram(bar, ATOMIC)
    assert check_functor_laws(flip, triples(with_k, 10)).ok
    for a, f, b, _, _ in triples(with_k, 3):
        assert flip.morphism_map(a, f, b) == f


def test_flip_diverges_outside_window():
    flip = functor_flip(4)
    big = build_successor("with-K", DEFAULT_SCHEDULE, 6)
    assert flip.object_map(big).universe_bound <= 4


def test_corrupted_morphism_part_breaks_laws(with_k):
    bad = ComputedFunctional(lambda oracle, x, stage: (x + 1) % W, "shift")
    F = EffectivizedFunctor("computable", functor_flip(W).object_part, bad, ATOMIC,
                            SUCC_K, SUCC_K, "bad")
    report = check_functor_laws(F, triples(with_k, 3))
    assert not report.ok
    assert report.violations[0]["law"] == "identity"


def test_non_injective_morphism_output_raises(with_k):
    const = ComputedFunctional(lambda oracle, x, stage: 0, "const")
    F = EffectivizedFunctor("computable", functor_flip(W).object_part, const, ATOMIC,
                            SUCC_K, SUCC_K)
    a, f, b, _, _ = triples(with_k, 1)[0]
    with pytest.raises(IllFormedFunctor):
        F.morphism_map(a, f, b)


def test_flip_is_its_own_pseudo_inverse(with_k):
    flip = functor_flip(W)
    lam = identity_witness(ATOMIC)
    samples = [t[:3] for t in triples(with_k, 4)]
    reports = check_pseudo_inverse(flip, flip, lam, lam, samples, samples)
    assert set(reports) == {"GF~id", "FG~id", "compatibility-C", "compatibility-D"}
    assert all(r.ok for r in reports.values())


def test_swapped_witness_is_caught(with_k):
    flip = functor_flip(W)
    lam = identity_witness(ATOMIC)
    bad = swapped_witness(lam, 0, 1)
    samples = [t[:3] for t in triples(with_k, 4)]
    reports = check_pseudo_inverse(flip, flip, bad, lam, samples, samples)
    assert not reports["GF~id"].ok
    assert not reports["compatibility-C"].ok


def test_swapped_positive_witness(with_k):
    F = identity_functor(SUCC_K, POSITIVE)
    bad = swapped_witness(identity_witness(POSITIVE), 2, 5)
    samples = [t[:3] for t in triples(with_k, 2)]
    assert not check_effective_isomorphism(F, F, bad, samples).ok


def test_malformed_witness_raises(with_k):
    lam = identity_witness(ATOMIC)
    with pytest.raises(WitnessMalformed):
        lam.evaluate(with_k, W, W + 1)
    half = ComputedFunctional(lambda oracle, x, stage: x if x < 2 else None, "half")
    with pytest.raises(WitnessMalformed):
        IsoWitness(half, ATOMIC).evaluate(with_k, W, W)


def test_drop_add_pseudo_inverse():
    sched = DEFAULT_SCHEDULE
    with_k = build_successor("with-K", sched, 16)
    plain = build_successor("plain", sched, 16)
    drop, add = functor_drop_K(16), functor_add_K(sched)
    st = sched.final_stage
    lam = identity_witness(POSITIVE)
    sc = [t[:3] for t in triples(with_k, 3)]
    sd = [t[:3] for t in triples(plain, 3, seed=1)]
    reports = check_pseudo_inverse(drop, add, lam, lam, sc, sd, st)
    assert all(r.ok for r in reports.values()), {k: r.violations[:1] for k, r in reports.items()}


def test_drop_without_add_is_not_inverse():
    """Negative control: drop-K followed by the identity loses K."""
    sched = DEFAULT_SCHEDULE
    with_k = build_successor("with-K", sched, 16)
    drop = functor_drop_K(16)
    plain_copy = EffectivizedFunctor("positive-enumerable", identity_functor(
        drop.target).object_part, identity_graph_operator(16), POSITIVE, drop.target,
        SUCC_K, "fake-add")
    round_trip = compose(plain_copy, drop).object_map(with_k, sched.final_stage)
    assert encode_diagram(round_trip, POSITIVE) != encode_diagram(with_k, POSITIVE)


def test_isomorphic_inputs_give_isomorphic_outputs(with_k):
    flip = functor_flip(W)
    for a, _, b, _, _ in triples(with_k, 3):
        fa, fb = flip.object_map(a), flip.object_map(b)
        assert next(find_isomorphisms(fa, fb, limit=1), None) is not None


def test_object_part_is_stage_monotone():
    sched = DEFAULT_SCHEDULE
    plain = build_successor("plain", sched, 16)
    add = functor_add_K(sched)
    outs = [encode_diagram(add.object_map(plain, s), POSITIVE) for s in range(sched.final_stage + 1)]
    assert all(x <= y for x, y in zip(outs, outs[1:]))
    assert outs[0] != outs[-1]

