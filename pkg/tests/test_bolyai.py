import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pizza.bolyai import (Parallelotope, compose, kz_equal, kz_vector, moved_pieces, parallelogram_to_rectangle,
                          parallelotope_normal_form, polygon_to_rectangle, rectangle_retile, reduces_to_flat,
                          reverse)
from pizza.certificate import verify_certificate
from pizza.coxeter import enumerate_group
from pizza.errors import DomainError
from pizza.field import make_field
from pizza.regions import exact_volume, hull_region
from pizza.roots import arrangement

from oracles import KZ_FIXTURES, as_items, cell_oracle, random_parallelotope, shear

Q = make_field(1)


def test_figure_parallelogram():
    p = Parallelotope.make((0, 0), [(6, 0), (Fraction(7, 10), 3)])
    cert = parallelogram_to_rectangle(p)
    assert verify_certificate(cert).ok
    assert cert.params["source_area"] == cert.params["target_area"] == Q(18)


def test_rectangle_identity_and_largeshear():
    cert = parallelogram_to_rectangle(Parallelotope.make((0, 0), [(4, 0), (0, 2)]))
    assert verify_certificate(cert).ok and moved_pieces(cert) == 0
    cert = parallelogram_to_rectangle(Parallelotope.make((0, 0), [(2, 0), (9, 1)]))
    assert verify_certificate(cert).ok and cert.translation_only
    # one strip per unit of shear/base plus the boundary pieces
    assert len(cert.pairings) >= 5


@pytest.mark.parametrize("src,w2,area", [((8, 3), 6, 24), ((9, 1), 3, 9), ((3, 3), 9, 9), ((1, 1), 1, 1),
                                         ((5, 2), Fraction(7, 2), 10), ((2, 7), 5, 14)])
def test_rectangle_retile(src, w2, area):
    cert = rectangle_retile(Q(src[0]), Q(src[1]), Q(w2))
    v = verify_certificate(cert)
    assert v.ok, v.failures
    assert all(q.isometry.is_translation() for q in cert.pairings)
    assert cert.side_volume(1) == cert.side_volume(-1) == Q(area)


def test_figure_retile_has_three_pieces():
    cert = rectangle_retile(Q(8), Q(3), Q(6))
    assert len(cert.pairings) == 3 and cert.translation_only


def test_compose_and_reverse():
    c1 = rectangle_retile(Q(8), Q(3), Q(6))
    c2 = rectangle_retile(Q(6), Q(4), Q(12))
    both = compose(c1, c2)
    assert verify_certificate(both).ok
    assert verify_certificate(reverse(both)).ok


def test_triangle_and_pentagon():
    cert = polygon_to_rectangle([(0, 0), (1, 0), (0, 1)])
    assert verify_certificate(cert).ok and cert.params["height"] == Q(Fraction(1, 2))
    verts = [(0, 0), (4, 0), (5, 2), (2, 4), (-1, 2)]
    cert = polygon_to_rectangle(verts, width=2)
    assert verify_certificate(cert).ok
    assert cert.params["area"] == exact_volume(hull_region([(Q(x), Q(y)) for x, y in verts], Q))


def test_octagon_to_unit_width():
    A = arrangement("B2")
    W = enumerate_group(A.positive)
    F = A.system.field
    pts = list(dict.fromkeys(w((F(2), F(Fraction(1, 2)))) for w in W.elements))
    cert = polygon_to_rectangle(pts, width=1, field=F)
    assert verify_certificate(cert).ok
    assert cert.params["area"] == exact_volume(hull_region(pts, F))


def test_normal_form():
    vol, box = parallelotope_normal_form(Parallelotope.make((0, 0), [(1, 0), (1, 1)]))
    assert vol == 1 and box.is_rectangular()
    e = [(1, 2, 0), (0, 1, 3), (2, 0, 1)]
    base = parallelotope_normal_form(Parallelotope.make((0, 0, 0), e))[0]
    for perm in itertools.permutations(e):
        assert parallelotope_normal_form(Parallelotope.make((0, 0, 0), list(perm)))[0] == base
    # an orthogonal image (coordinate swap with sign) keeps the volume
    img = [(-y, x, z) for x, y, z in e]
    assert parallelotope_normal_form(Parallelotope.make((0, 0, 0), img))[0] == base
    with pytest.raises(DomainError):
        Parallelotope.make((0, 0), [(1, 1), (2, 2)])


# ---------------------------------------------------------------------------
# box classes against a brute-force cell decomposition

@pytest.mark.parametrize("x,y", KZ_FIXTURES)
def test_kz_equal_matches_cellcell_oracle(x, y):
    n = len((x or y)[0][1])
    expect = cell_oracle(x, n) == cell_oracle(y, n)
    assert kz_equal(as_items(x), as_items(y), dim=n) == expect


def test_kz_vector_values():
    v = kz_vector([Parallelotope.box((0, 0), (1, 6), False)])
    assert v.floats() == (0, 0.0, 6.0)
    v = kz_vector([Parallelotope.box((0, 0), (1, 6), True)])
    assert v.floats() == (1, 7.0, 6.0)
    assert kz_vector([], dim=2).floats() == (0, 0.0, 0.0)


def test_kz_matches_a1n_residue():
    from pizza.engine import a1n_closed_form

    A = arrangement("A1^3")
    a = tuple(Q(Fraction(k, 10)) for k in (2, 1, 3))
    value, coef, _ = a1n_closed_form(a, A.positive)
    box = Parallelotope.box((0, 0, 0), tuple(2 * x for x in a), closed=False)
    v = kz_vector([(coef, box)])
    assert v.chi == 0 and v.v[0].is_zero() and v.v[1].is_zero() and float(v.v[2]) == float(value)


@given(st.lists(st.tuples(st.sampled_from([1, -1]), st.lists(st.integers(0, 3), min_size=2, max_size=2),
                          st.lists(st.integers(0, 3), min_size=2, max_size=2), st.booleans()), max_size=5))
def test_kz_property_cells(raw):
    items = [(s, tuple(lo), tuple(l + d for l, d in zip(lo, dd)), c) for s, lo, dd, c in raw]
    got = kz_vector(as_items(items), dim=2).floats()
    assert tuple(round(x) for x in got) == tuple(cell_oracle(items, 2))


def test_kernel_law_random():
    rng = random.Random(11)
    for trial in range(50):
        n = rng.choice([2, 3])
        items = [(rng.choice([1, -1]), random_parallelotope(rng, n)) for _ in range(rng.randint(1, 3))]
        if trial % 2 == 0:
            items += [(-s, shear(p, rng)) for s, p in items]
        top = sum((s * exact_volume(p.region()) for s, p in items), Q.zero)
        assert reduces_to_flat(items) == (not top)
