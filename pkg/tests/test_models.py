import random
from fractions import Fraction

import pytest

from omintail.iso import decide_iso
from omintail.order import Eta, Finite, Omega, Sum, cmp_points, enumerate_point, size
from omintail.models import (
    DiscreteElement,
    HahnVector,
    MixedStructures,
    NoWitnessFound,
    ParamSet,
    TheoryId,
    TypePreconditionError,
    above_hull,
    arch_sim,
    arch_sim_oracle,
    build_model,
    canonical_tail_check,
    closure,
    faithfulness_check,
    ladder,
    membership,
    nonsimplicity_search,
)

D, O, A = TheoryId.DISCRETE, TheoryId.ODAG, TheoryId.AFFINE


def vec(index, **kw):
    return HahnVector.of(index, {int(k[1:]): v for k, v in kw.items()})


# ---------------------------------------------------------------- carriers


def test_theory_names():
    assert TheoryId.parse("AffineOdag") is A
    with pytest.raises(ValueError):
        TheoryId.parse("Field")


def test_build_examples():
    m = build_model(D, Finite(2))
    assert DiscreteElement(m.index, 0, 5) < DiscreteElement(m.index, 1, -3)
    assert vec(Finite(3), e0=1, e2=2).compare(vec(Finite(3), e1=7)) > 0
    assert build_model(A, Eta).index == Sum((Finite(2), Eta))


def test_hahn_arithmetic():
    idx = Finite(3)
    u, v = vec(idx, e0=1, e2=2), vec(idx, e2=-2, e1=3)
    assert (u + v).as_dict() == {0: 1, 1: 3}
    assert (u - u).lead is None and not (u - u)
    assert u.scale(Fraction(1, 2)).lead_coeff == 1
    assert (-u).sign() == -1


def _random_discrete(rng, m):
    return m.random_element(rng)


@pytest.mark.parametrize("theory", [D, O])
def test_order_axioms(theory):
    rng = random.Random(3)
    m = build_model(theory, Eta)
    pool = [m.random_element(rng) for _ in range(80)]
    for _ in range(10_000):
        x, y, z = (rng.choice(pool) for _ in range(3))
        xy, yz = x.compare(y), y.compare(z)
        assert xy == -y.compare(x)
        assert (xy == 0) == (x == y)
        if xy < 0 and yz < 0:
            assert x.compare(z) < 0
        if theory is O and xy < 0:
            assert (x + z).compare(y + z) < 0


def test_elements_validate_points():
    from omintail.order import InvalidPoint

    with pytest.raises(InvalidPoint):
        HahnVector.of(Finite(2), {5: 1})


# ---------------------------------------------------------------- closure


def test_closure_examples():
    idx = Omega
    e0, e1 = HahnVector.unit(idx, 0), HahnVector.unit(idx, 1)
    assert membership(O, ParamSet(O, (e0,)), e0.scale(Fraction(3, 2)))
    assert not membership(O, ParamSet(O, (e0,)), e1)
    m = build_model(A, Omega)
    a, b = m.generator(0), m.generator(3)
    hull = ParamSet(A, (a, b))
    assert membership(A, hull, b.scale(2) - a)
    assert not membership(A, hull, a + b)
    d = DiscreteElement(Omega, 2, 0)
    assert membership(D, ParamSet(D, (d,)), d.shift(-40))
    assert not membership(D, ParamSet(D, (d,)), DiscreteElement(Omega, 3, 0))


def test_closure_rejects_mixed_structures():
    with pytest.raises(MixedStructures):
        closure(O, ParamSet(O, (HahnVector.unit(Omega, 0), HahnVector.unit(Eta, Fraction(1, 2)))))


def test_closure_json():
    c = closure(O, ParamSet(O, (vec(Omega, e0=1, e2=1), vec(Omega, e2=1))))
    assert c.to_json()["dimension"] == 2


# ---------------------------------------------------------------- Archimedean equivalence


def test_arch_sim_discrete_examples():
    empty = ParamSet(D)
    assert arch_sim(D, empty, DiscreteElement(Eta, Fraction(1, 2), 3), DiscreteElement(Eta, Fraction(1, 2), 100))
    assert not arch_sim(D, empty, DiscreteElement(Eta, Fraction(1, 2), 0), DiscreteElement(Eta, Fraction(1, 3), 0))


def test_arch_sim_odag_examples():
    idx = Finite(3)
    empty = ParamSet(O)
    assert arch_sim(O, empty, vec(idx, e2=1), vec(idx, e2=5, e1=-1))
    assert not arch_sim(O, empty, vec(idx, e2=1), vec(idx, e1=5))
    # parameters widen the classes between their leading indices
    B = ParamSet(O, (vec(idx, e0=1), vec(idx, e2=1)))
    assert arch_sim(O, B, vec(idx, e1=1), vec(idx, e2=5))
    # span(e0, e1) has nothing above e2, so one parameter is not enough
    assert not arch_sim(O, ParamSet(O, (vec(idx, e0=1),)), vec(idx, e2=1), vec(idx, e1=5))


def test_arch_sim_type_guard():
    with pytest.raises(TypePreconditionError):
        arch_sim(O, ParamSet(O), vec(Omega, e1=-1), vec(Omega, e1=1))
    m = build_model(A, Omega)
    with pytest.raises(TypePreconditionError):
        arch_sim(A, ParamSet(A), m.generator(0).scale(2), m.generator(1))


def test_leading_index_law():
    rng = random.Random(11)
    m = build_model(O, Eta)
    for _ in range(1000):
        u, v = m.random_element(rng), m.random_element(rng)
        if rng.random() < 0.3:
            v = (v + HahnVector.unit(m.index, u.lead).scale(abs(u.lead_coeff) * 64)) if u.lead else v
        rule = u.lead == v.lead
        assert arch_sim(O, ParamSet(O), u, v) == rule
        assert arch_sim_oracle(O, ParamSet(O), u, v) == rule


@pytest.mark.parametrize("theory", [D, O, A])
def test_structural_rule_matches_oracle(theory):
    rng = random.Random(5)
    m = build_model(theory, Eta)
    for _ in range(150):
        B = ParamSet(theory, tuple(m.random_element(rng, spread=6) for _ in range(rng.randint(0, 2))))
        a, b = m.random_element(rng, spread=6), m.random_element(rng, spread=6)
        if theory is D:
            b = b if rng.random() < 0.5 else a.shift(rng.randint(-60, 60))
        assert arch_sim(theory, B, a, b) == arch_sim_oracle(theory, B, a, b), (B, a, b)


# ---------------------------------------------------------------- ladders


def test_discrete_ladder_over_two_points():
    m = build_model(D, Finite(2))
    lad = ladder(D, ParamSet(D), m)
    assert lad.claimed_order == Finite(2)
    elems = [DiscreteElement(m.index, c, k) for c in (0, 1) for k in range(-50, 51)]
    classes = []
    for x in elems:
        for cls in classes:
            if arch_sim(D, ParamSet(D), cls[0], x):
                cls.append(x)
                break
        else:
            classes.append([x])
    assert len(classes) == 2
    assert [lad.class_of(c[0]) for c in classes] == [0, 1]


def test_odag_ladder_over_eta():
    m = build_model(O, Eta)
    lad = ladder(O, ParamSet(O), m)
    assert lad.claimed_order == Eta
    rng = random.Random(2)
    for _ in range(500):
        v = m.random_element(rng)
        assert lad.class_of(v) == v.lead
        assert arch_sim(O, ParamSet(O), v, lad.representative(v.lead))


@pytest.mark.parametrize("theory", [D, O])
def test_ladder_is_an_order_copy_of_source(theory, catalog_terms):
    for L in catalog_terms:
        lad = ladder(theory, ParamSet(theory), build_model(theory, L))
        assert decide_iso(lad.claimed_order, L).is_iso
        reps = list(lad.classes(12))
        for (p, x) in reps:
            assert lad.class_of(x) == p
            for (q, y) in reps:
                assert (x.compare(y) < 0) == (cmp_points(L, p, q) < 0)
                assert arch_sim(theory, ParamSet(theory), x, y) == (p == q)


def test_discrete_reduction_respects_iso(catalog_terms):
    ladders = [ladder(D, ParamSet(D), build_model(D, L)).claimed_order for L in catalog_terms]
    for a, la in zip(catalog_terms, ladders):
        for b, lb in zip(catalog_terms, ladders):
            assert decide_iso(a, b).kind == decide_iso(la, lb).kind


def test_affine_ladder_is_a_tail():
    m = build_model(A, Omega)
    B = ParamSet(A, (m.prefix(0), m.prefix(1)))
    lad = ladder(A, B, m)
    assert decide_iso(lad.claimed_order, Omega).is_iso
    reps = list(lad.classes(8))
    for p, x in reps:
        assert lad.class_of(x) == p
        for q, y in reps:
            assert arch_sim(A, B, x, y) == (p == q)
    with pytest.raises(ValueError):
        ladder(A, ParamSet(A, (m.prefix(0),)), m)


def test_affine_ladder_from_random_params_over_eta():
    m = build_model(A, Eta)
    rng = random.Random(4)
    for _ in range(10):
        b1 = m.prefix(0)
        b2 = b1 + (m.prefix(1) - b1).scale(Fraction(rng.randint(1, 8), rng.randint(1, 8)))
        lad = ladder(A, ParamSet(A, (b1, b2)), m)
        assert decide_iso(lad.claimed_order, Eta).is_iso


# ---------------------------------------------------------------- nonsimplicity


def test_nonsimplicity_witnesses():
    d = nonsimplicity_search(D, 3)
    assert (d.n, d.witness_fn.describe()) == (1, "x+1")
    o = nonsimplicity_search(O, 3)
    assert (o.n, o.witness_fn.describe()) == (1, "2x")
    a = nonsimplicity_search(A, 3)
    assert (a.n, a.witness_fn.describe()) == (2, "2y-x")
    assert a.ruled_out == {1: 1}
    for cert in (d, o, a):
        assert cert.witness_fn.apply(cert.witness_tuple) == cert.produced
        assert cert.produced not in cert.witness_tuple


def test_affine_arity_one_is_exhausted():
    with pytest.raises(NoWitnessFound) as info:
        nonsimplicity_search(A, 1, height=8)
    assert info.value.ruled_out == {1: 1}


def test_nonsimplicity_rejects_zero_arity():
    with pytest.raises(ValueError):
        nonsimplicity_search(D, 0)


# ---------------------------------------------------------------- canonical tail


@pytest.mark.parametrize("L", [Eta, Omega])
def test_canonical_tail_small(L):
    r = canonical_tail_check(L, 150, 7)
    assert r.ok and r.checked > 100
    assert r.checked + r.skipped == 150


def test_canonical_tail_identical_sets_agree():
    m = build_model(A, Eta)
    rng = random.Random(1)
    for _ in range(50):
        P = ParamSet(A, (m.random_element(rng), m.random_element(rng)))
        c, d = m.random_element(rng), m.random_element(rng)
        assert arch_sim(A, P, c, d) == arch_sim(A, ParamSet(A, P.elements), c, d)


def test_below_hull_is_detected():
    m = build_model(A, Omega)
    params = [m.prefix(0), m.generator(3)]
    assert not above_hull(params, m.generator(1))
    assert above_hull(params, m.generator(5))


# ---------------------------------------------------------------- faithfulness


@pytest.mark.parametrize("theory", [D, O])
def test_faithfulness(theory):
    r = faithfulness_check(theory, 200, 0)
    assert r.ok and r.checked == 200


def test_faithfulness_examples():
    idx = Finite(3)
    b1, b2 = vec(idx, e1=1), vec(idx, e2=1)
    c = b1.scale(3) + b2.scale(Fraction(1, 2))
    assert arch_sim(O, ParamSet(O), c, b2)
    b = DiscreteElement(Omega, 4, 0)
    assert arch_sim(D, ParamSet(D), b.shift(17), b)
    with pytest.raises(TypePreconditionError):
        arch_sim(O, ParamSet(O), b1 - b1, b1)


def test_arbitrary_sets_can_break_faithfulness():
    # (e1 + e0) - e1 = e0 opens a fresh class below both parameters
    idx = Finite(2)
    B = [vec(idx, e1=1, e0=1), vec(idx, e1=1)]
    c = B[0] - B[1]
    assert closure(O, ParamSet(O, tuple(B))).realized_contains(c)
    assert not any(arch_sim(O, ParamSet(O), c, b) for b in B)
    assert not faithfulness_check(O, 500, 0, mode="arbitrary").ok


def test_faithfulness_rejects_affine():
    with pytest.raises(ValueError):
        faithfulness_check(A, 10, 0)
