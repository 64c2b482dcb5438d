import json
import random
from fractions import Fraction

import pytest

from omintail.order import Direction, Eta, Finite, Omega, OmegaStar, Sum, cmp_points, enumerate_point, interval, neighbor
from omintail.invariants import (
    MixedTheories,
    OutsideSixTypes,
    SimpleModelSpec,
    SimpleTheorySpec,
    SixType,
    UnknownCut,
    all_specs,
    apparent_iso,
    classify_filling,
    classify_segment,
    f2_invariant,
    order_reduct_equivalent,
    random_spec_pairs,
    realize_model,
    realized_iso_surrogate,
    smooth_invariant,
)

ONE = SimpleTheorySpec.finitely_many(["c1"])
TWO = SimpleTheorySpec.finitely_many(["c1", "c2"])
RAT = SimpleTheorySpec.rational_indexed()


def test_six_type_terms():
    assert [t.label for t in SixType] == ["empty", "1", "eta", "1+eta", "eta+1", "1+eta+1"]
    assert SixType.EMPTY.term() is None
    assert SixType.ONE_ETA_ONE.term() == Sum((Finite(1), Eta, Finite(1)))


def test_realize_examples():
    full = realize_model(ONE, SimpleModelSpec.of({"c1": 5}))
    assert full.term == Sum((Omega, Finite(1), Eta, Finite(1), OmegaStar))
    bare = realize_model(ONE, SimpleModelSpec.of({"c1": 0}))
    assert bare.term == Sum((Omega, OmegaStar))
    assert bare.segment("c1") is None
    m = realize_model(TWO, SimpleModelSpec.of({"c1": 2, "c2": 3}))
    assert [classify_filling(TWO, m, c) for c in ("c1", "c2")] == [SixType.ETA, SixType.ONE_ETA]


def test_classify_segment_examples():
    assert classify_segment(Sum((Eta, Finite(1), Eta))) is SixType.ETA
    assert classify_segment(None) is SixType.EMPTY
    assert classify_segment(Sum((Finite(1), Eta))) is SixType.ONE_ETA
    with pytest.raises(OutsideSixTypes):
        classify_segment(Finite(2))
    with pytest.raises(OutsideSixTypes):
        classify_segment(Omega)


def test_round_trip_all_two_cut_specs():
    specs = all_specs(TWO)
    assert len(specs) == 36
    for spec in specs:
        m = realize_model(TWO, spec)
        got = {c: classify_filling(TWO, m, c) for c in TWO.cuts}
        assert SimpleModelSpec.of(got) == spec


def test_thirty_six_distinct_vectors():
    assert len({smooth_invariant(TWO, s) for s in all_specs(TWO)}) == 36


def test_smooth_examples():
    v = smooth_invariant(TWO, SimpleModelSpec.of({"c1": 5}))
    assert v.as_dict() == {"c1": 5, "c2": 0}
    a, b = SimpleModelSpec.of({"c1": 1, "c2": 2}), SimpleModelSpec.of({"c2": 2, "c1": 1})
    assert smooth_invariant(TWO, a) == smooth_invariant(TWO, b)
    assert smooth_invariant(TWO, SimpleModelSpec.of({"c2": 0})) != smooth_invariant(TWO, SimpleModelSpec.of({"c2": 2}))
    with pytest.raises(MixedTheories):
        smooth_invariant(RAT, SimpleModelSpec.of([(Fraction(1, 2), 2)]))


def test_f2_examples():
    h, t = Fraction(1, 2), Fraction(1, 3)
    a = SimpleModelSpec.of([(h, 2), (t, 3)])
    b = SimpleModelSpec.of([(t, 3), (h, 2)])
    assert f2_invariant(RAT, a) == f2_invariant(RAT, b)
    assert f2_invariant(RAT, a) != f2_invariant(RAT, SimpleModelSpec.of([(h, 2), (Fraction(1, 4), 3)]))
    assert f2_invariant(RAT, SimpleModelSpec.of([(h, 2), (h, 2)])) == frozenset({(h, 2)})
    with pytest.raises(ValueError):
        SimpleModelSpec.of([(h, 2), (h, 3)])


def test_f2_is_order_insensitive():
    rng = random.Random(0)
    for _ in range(20):
        listing = [(Fraction(rng.randint(1, 50), rng.randint(51, 99)), rng.randrange(1, 6)) for _ in range(6)]
        listing = list(dict(listing).items())
        shuffled = listing[:]
        rng.shuffle(shuffled)
        assert f2_invariant(RAT, SimpleModelSpec.of(listing)) == f2_invariant(RAT, SimpleModelSpec.of(shuffled))


def test_apparent_iso_examples():
    a = SimpleModelSpec.of({"c1": 3})
    assert apparent_iso(ONE, a, a)
    assert not apparent_iso(ONE, a, SimpleModelSpec.of({"c1": 4}))
    h, t = Fraction(1, 2), Fraction(1, 3)
    assert apparent_iso(RAT, SimpleModelSpec.of([(h, 2), (t, 5)]), SimpleModelSpec.of([(t, 5), (h, 2)]))


def test_apparent_iso_matches_surrogate_on_seeded_pairs():
    pairs = random_spec_pairs(TWO, 50, 0)
    assert any(apparent_iso(TWO, a, b) for a, b in pairs)
    assert not all(apparent_iso(TWO, a, b) for a, b in pairs)
    for a, b in pairs:
        assert apparent_iso(TWO, a, b) == realized_iso_surrogate(TWO, a, b)


def test_bare_order_forgets_which_cut_is_filled():
    a, b = SimpleModelSpec.of({"c1": 2}), SimpleModelSpec.of({"c2": 2})
    assert not apparent_iso(TWO, a, b)
    assert not realized_iso_surrogate(TWO, a, b)
    assert order_reduct_equivalent(TWO, a, b)


@pytest.mark.parametrize("t", [SixType.ETA, SixType.ONE_ETA, SixType.ETA_ONE, SixType.ONE_ETA_ONE])
def test_fillings_are_dense(t):
    seg = realize_model(ONE, SimpleModelSpec.of({"c1": t})).segment("c1")
    rng = random.Random(int(t))
    pts = [enumerate_point(seg, i) for i in range(60)]
    for _ in range(100):
        p, q = rng.sample(pts, 2)
        if cmp_points(seg, p, q) > 0:
            p, q = q, p
        assert interval(seg, p, q) is not None
        assert neighbor(seg, p, Direction.SUCC) is None


def test_unknown_cut():
    with pytest.raises(UnknownCut):
        smooth_invariant(TWO, SimpleModelSpec.of({"c9": 2}))
    with pytest.raises(UnknownCut):
        realize_model(TWO, SimpleModelSpec.of({"c1": 2})).segment("c9")


def test_json_round_trip(tmp_path):
    for theory in (TWO, RAT):
        assert SimpleTheorySpec.from_json(json.loads(json.dumps(theory.to_json()))) == theory
    for spec in (SimpleModelSpec.of({"c1": 4}), SimpleModelSpec.of([(Fraction(2, 7), 3)])):
        assert SimpleModelSpec.from_json(json.loads(json.dumps(spec.to_json()))) == spec
    with pytest.raises(ValueError):
        SimpleTheorySpec.from_json({"kind": "weird"})
