import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pizza.coxeter import chambers_with_signs, enumerate_group
from pizza.field import make_field
from pizza.regions import (Constraint, HalfOpenRegion, RegionSet, Surd, UnboundedError, box_intrinsic_vector,
                           euler_cs, exact_volume, hull_region, intrinsic_vector_2d, order_polygon, shoelace)
from pizza.roots import arrangement

Q = make_field(1)
F4 = make_field(4)


def _shoelace_float(pts):
    pts = sorted(pts, key=lambda p: math.atan2(p[1], p[0]))
    return abs(sum(pts[k][0] * pts[k - 1][1] - pts[k - 1][0] * pts[k][1] for k in range(len(pts)))) / 2


def test_emptiness():
    e = (Q.one,)
    lt = HalfOpenRegion(1, [Constraint(e, Q.zero, True), Constraint((-Q.one,), Q.zero, False)], Q)
    assert lt.is_empty()
    le = HalfOpenRegion(1, [Constraint(e, Q.zero, False), Constraint((-Q.one,), Q.zero, False)], Q)
    assert not le.is_empty()
    A = arrangement("I2(4)")
    ch = chambers_with_signs(A, enumerate_group(A.positive))
    for c1 in ch:
        for c2 in ch:
            if c1 is not c2:
                assert c1.h_rep.intersect(c2.h_rep).is_empty()


def test_vertices_and_volume():
    sq = HalfOpenRegion.box([0, 0], [1, 1], Q)
    assert len(sq.vertices()) == 4
    A = arrangement("B2")
    W = enumerate_group(A.positive)
    with pytest.raises(UnboundedError):
        chambers_with_signs(A, W)[0].h_rep.vertices(require_bounded=True)
    F = A.system.field
    square = hull_region(list(dict.fromkeys(w((F.one, F.zero)) for w in W.elements)), F)
    assert len(square.vertices()) == 4
    pts = list(dict.fromkeys(w((F(2), F(Fraction(1, 2)))) for w in W.elements))
    octa = hull_region(pts, F)
    V = octa.vertices()
    assert len(V) == 8
    vol = exact_volume(octa)
    assert vol == F(Fraction(23, 2))
    assert float(vol) == pytest.approx(_shoelace_float([(float(x), float(y)) for x, y in V]), abs=1e-12)
    simplex = hull_region([(Q.zero, Q.zero), (Q.one, Q.zero), (Q.zero, Q.one)], Q)
    assert exact_volume(simplex) == Q(Fraction(1, 2))
    hb = HalfOpenRegion.halfopen_box([0, 0], [Fraction(2, 5), Fraction(1, 5)], Q)
    assert exact_volume(hb) == Q(Fraction(2, 25))


def test_euler_characteristic():
    assert euler_cs(HalfOpenRegion.halfopen_box([0], [1], Q)) == 0
    assert euler_cs(HalfOpenRegion.box([0, 0], [1, 1], Q)) == 1
    assert euler_cs(HalfOpenRegion.box([0, 0], [1, 1], Q, True, True)) == 1
    assert euler_cs(HalfOpenRegion.box([0], [1], Q, True, True)) == -1
    for n in (1, 2, 3):
        assert euler_cs(HalfOpenRegion.halfopen_box([0] * n, [1] * n, Q)) == 0


def test_intrinsic_vectors():
    closed = intrinsic_vector_2d(HalfOpenRegion.box([0, 0], [1, 6], Q))
    # Steiner oracle: area of the r-neighbourhood is 6 + 14 r + pi r^2, V1 = 14/2
    assert closed.chi == 1 and closed.intrinsic[0] == Surd.from_field(Q(7)) and closed.intrinsic[1] == 6
    assert box_intrinsic_vector([Q(1), Q(6)], False).as_tuple() == (1, 7, 6)
    ho = intrinsic_vector_2d(HalfOpenRegion.halfopen_box([0, 0], [1, 6], Q))
    assert ho.chi == 0 and ho.intrinsic[0].is_zero() and ho.intrinsic[1] == 6
    assert box_intrinsic_vector([Q(1), Q(6)], True).as_tuple() == (0, 0, 6)
    sq = intrinsic_vector_2d(HalfOpenRegion.box([0, 0], [1, 1], Q))
    assert sq.intrinsic[0] == Surd.from_field(Q(2))


@given(st.fractions(0, 5, max_denominator=20).filter(bool), st.fractions(0, 5, max_denominator=20).filter(bool))
def test_halfopen_box_has_only_top_volume(a, b):
    v = intrinsic_vector_2d(HalfOpenRegion.halfopen_box([0, 0], [a, b], Q))
    assert v.chi == 0 and v.intrinsic[0].is_zero() and v.intrinsic[1] == Q(a * b)


@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=3, max_size=9, unique=True))
def test_hull_volume_matches_shoelace(pts):
    import numpy as np

    P = np.array(pts, dtype=float)
    if np.linalg.matrix_rank(P[1:] - P[0]) < 2:
        return
    from scipy.spatial import ConvexHull

    R = hull_region([(Q(x), Q(y)) for x, y in pts], Q)
    assert float(exact_volume(R)) == pytest.approx(ConvexHull(P).volume, abs=1e-9)
    V = order_polygon(R.vertices())
    assert abs(shoelace(V)) == exact_volume(R)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 4), st.integers(1, 4))
def test_region_set_algebra(x, y, w, h):
    big = RegionSet.of(HalfOpenRegion.box([-6, -6], [10, 10], Q))
    b = RegionSet.of(HalfOpenRegion.halfopen_box([x, y], [x + w, y + h], Q))
    rest = big.difference(b)
    assert rest.intersect(b).is_empty()
    assert rest.union(b).equals(big)
    assert rest.volume() + b.volume() == big.volume()
    assert rest.euler_cs() + b.euler_cs() == big.euler_cs()


def test_surd_cancellation():
    s2 = Surd.sqrt(F4(2))
    s8 = Surd.sqrt(F4(8))
    assert (s2 + s2 - s8).is_zero()
    assert float(Surd.sqrt(F4(3))) == pytest.approx(math.sqrt(3))
