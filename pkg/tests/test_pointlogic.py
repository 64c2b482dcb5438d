from fractions import Fraction

import pytest

from omintail.order import Eta, Finite, Omega, Replace, Sum, TailView, Zeta, cmp_points, enumerate_point
from omintail.pointlogic import (
    NotClassT,
    PointClass,
    classify_point,
    falsify,
    locate_phi_base,
)
from omintail.reductions import apply_f, make_T, make_X, sample_basepoints, x_point

X = make_X()


def test_x_blocks():
    got = [classify_point(X, x_point(v)) for v in ("0", "1", "3/2", "2", "3")]
    assert got == [PointClass.P0, PointClass.P1, PointClass.PURE_DENSE, PointClass.P2, PointClass.P3]


def test_atoms():
    assert classify_point(Eta, Fraction(1, 3)) is PointClass.PURE_DENSE
    assert classify_point(Omega, 0) is PointClass.PHI
    assert classify_point(Zeta, 4) is PointClass.PHI
    # the point just before a dense block is P0 only if its successor is P1
    assert classify_point(Sum((Finite(1), Eta)), (0, 0)) is PointClass.P1
    assert classify_point(Sum((Finite(2), Eta)), (0, 0)) is PointClass.P0


def test_falsify_finds_nothing_on_valid_labels():
    term = make_T(Finite(2)).result
    pts = [enumerate_point(term, i) for i in range(150)]
    for p in pts[:40]:
        assert falsify(term, p, pts) == []


def _first(term, count):
    return [enumerate_point(term, i) for i in range(count)]


def test_f_l_p1_points_track_l(catalog_terms):
    one = x_point("1")
    for L in catalog_terms:
        term = apply_f(L)
        p1 = [p for p in _first(term, 400) if classify_point(term, p) is PointClass.P1]
        assert p1, L
        # P1 sits exactly at the X-point 1 of each copy
        assert all(p[1] == one for p in p1)
        ls = [p[0] for p in p1][:100]
        for a in ls:
            for b in ls:
                assert (cmp_points(term, (a, one), (b, one)) > 0) == (cmp_points(L, a, b) > 0)


def test_f_finite_two_has_two_p1_points():
    term = apply_f(Finite(2))
    assert sum(classify_point(term, p) is PointClass.P1 for p in _first(term, 200)) == 2


def test_separators_of_t_finite_one_are_phi():
    cert = make_T(Finite(1))
    for n in range(10):
        assert classify_point(cert.result, cert.separator(n)) is PointClass.PHI


def test_locate_phi_base_examples():
    cert = make_T(Finite(1))
    inside = (0, (0, (0, x_point("3/2"))))
    assert locate_phi_base(TailView(cert.result, inside)) == cert.separator(0)
    assert locate_phi_base(TailView(cert.result, cert.separator(2))) == cert.separator(2)
    with pytest.raises(NotClassT):
        locate_phi_base(TailView(Omega, 3))


def test_phi_exactly_on_separators(catalog_terms):
    for L in catalog_terms:
        cert = make_T(L)
        for base in sample_basepoints(cert):
            view = TailView(cert.result, base)
            b = locate_phi_base(view)
            assert cert.is_separator(b)
            above = [p for p in view.points(400) if cmp_points(cert.result, p, b) >= 0][:200]
            for p in above:
                cls = classify_point(view, p)
                assert cls is not PointClass.OTHER
                assert (cls is PointClass.PHI) == cert.is_separator(p), (L, p, cls)


def test_tail_restriction_invariance(catalog_terms):
    for L in catalog_terms:
        cert = make_T(L)
        for base in sample_basepoints(cert, 3):
            view = TailView(cert.result, base)
            b = locate_phi_base(view)
            for p in view.points(150):
                if cmp_points(cert.result, p, b) >= 0:
                    assert classify_point(view, p) == classify_point(cert.result, p)


def test_other_never_appears_on_class_t(catalog_terms):
    for L in catalog_terms:
        term = make_T(L).result
        assert all(classify_point(term, p) is not PointClass.OTHER for p in _first(term, 300))


def test_classify_rejects_points_below_view():
    view = TailView(Omega, 3)
    with pytest.raises(ValueError):
        classify_point(view, 1)
    assert classify_point(view, 3) is PointClass.PHI
    assert classify_point(Replace(Omega, Eta), (0, Fraction(1, 2))) is PointClass.PURE_DENSE
