from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from pizza.certificate import verify_certificate
from pizza.dihedral import (DihedralFrame, angle_checks, build_R0, frederickson_certificate, hirschhorn_shares,
                            implied_sum, outer_cancellation_certificate, product_reduction, q_chain_check, wa_orbit)
from pizza.engine import Body, HypothesisError
from pizza.errors import DomainError
from pizza.field import make_field
from pizza.isometry import AffineIsometry, reflection_in_line
from pizza.regions import HalfOpenRegion

A = (Fraction(3, 10), Fraction(2, 10))


def _float_orbit_hull(m, a):
    # reflections in the lines through a at angles k pi / 2m, closed under composition
    mats = []
    for k in range(2 * m):
        t = k * np.pi / (2 * m) + np.pi / 2  # the line u_k^perp has direction u_{k+m}
        c, s = np.cos(2 * t), np.sin(2 * t)
        mats.append(np.array([[c, s], [s, -c]]))
    a = np.array([float(x) for x in a])
    frontier = [np.zeros(2)]
    seen = {(0.0, 0.0)}
    while frontier:
        new = []
        for p in frontier:
            for M in mats:
                q = a + M @ (p - a)
                key = (round(q[0], 9), round(q[1], 9))
                if key not in seen:
                    seen.add(key)
                    new.append(q)
        frontier = new
    return np.array(sorted(seen))


def test_r0_vertex_count_matches_hull_oracle():
    fr = DihedralFrame.of(2)
    a = fr.field(Fraction(2, 10)), fr.field(Fraction(3, 10))
    r0 = build_R0(2, a)
    pts = _float_orbit_hull(2, a)
    assert len(r0.orbit) == len(pts) == 8
    assert len(r0.vertices) == len(ConvexHull(pts).vertices)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_r0_is_wa_stable(m):
    fr = DihedralFrame.of(m)
    F = fr.field
    a = (F(Fraction(1, 10)), F(Fraction(7, 10)))
    r0 = build_R0(m, a)
    base = r0.region.canonical_constraints()
    for k in range(2 * m):
        g = reflection_in_line(r0.a, fr.u(k + m))
        assert g.apply_region(r0.region).canonical_constraints() == base
    assert set(wa_orbit(fr, r0.a, (F.zero, F.zero))) == set(r0.orbit)


def test_degenerate_placement_rejected():
    fr = DihedralFrame.of(2)
    F = fr.field
    on_line = (F.zero, F(Fraction(3, 10)))
    with pytest.raises(DomainError):
        build_R0(2, on_line)
    r0 = build_R0(2, on_line, degenerate=True)
    assert len(r0.vertices) < 8


@pytest.mark.parametrize("m", [2, 3])
def test_certificates_verify(m):
    outer = outer_cancellation_certificate(m, A)
    assert len(outer.pairings) == 4 * m
    assert verify_certificate(outer).ok
    fred = frederickson_certificate(m, A)
    assert verify_certificate(fred).ok
    s = implied_sum(m, A, outer=outer, fred=fred)
    assert s.ok and s.pieces_value == 0 and s.engine_value == 0
    assert fred.side_volume(1) == fred.side_volume(-1)


def test_pairing_labels_fix_a_or_lie_in_wa():
    outer = outer_cancellation_certificate(3, A)
    a = outer.params["a"]
    for q in outer.pairings:
        assert q.isometry.fixes(a)


def test_certificate_falsification():
    cert = outer_cancellation_certificate(2, A)
    q = cert.pairings[0]
    tweak = tuple(x + (cert.field(Fraction(1, 10**9)) if i == 0 else 0) for i, x in enumerate(q.isometry.translation))
    q.isometry = AffineIsometry(q.isometry.linear, tweak, {"kind": "isometry"}, "perturbed")
    v = verify_certificate(cert)
    assert not v.ok and any("pairing" in f for f in v.failures)
    cert = outer_cancellation_certificate(2, A)
    del cert.pieces["D0"]
    v = verify_certificate(cert)
    assert not v.ok and any("claim" in f or "unknown" in f for f in v.failures)


def test_certificate_json_roundtrip():
    from pizza.certificate import DissectionCertificate

    cert = frederickson_certificate(2, A)
    back = DissectionCertificate.loads(cert.dumps())
    assert back.dumps() == cert.dumps()
    assert verify_certificate(back).ok


@pytest.mark.parametrize("m", [3, 4])
def test_angle_values(m):
    rows = angle_checks(m, A)
    assert rows and all(ok for *_, ok in rows)
    # the documented instance: at P_2 for m = 4 the angle of Q_1 is pi/8
    if m == 4:
        assert (2, "prev", 1, True) in rows


@pytest.mark.parametrize("m", [3, 4])
def test_q_chain_odd_steps_hold(m):
    chain = dict(q_chain_check(m, A))
    assert all(chain[i] for i in range(1, 2 * m - 2, 2))


def test_q_chain_even_steps_break_area():
    # a rotation keeps area, so unequal areas rule out the even steps independently
    from pizza.dihedral import _frederickson_canonical, _prepare

    a0, _, _ = _prepare(4, A, True)
    cert = _frederickson_canonical(build_R0(4, a0))
    vol = [cert.pieces[f"Q{k}"].region.volume() for k in range(6)]
    chain = dict(q_chain_check(4, A))
    for i in (2, 4):
        assert vol[i] != vol[i - 1] and not chain[i]


def test_product_reduction():
    F1 = Fraction
    pr = product_reduction("A1^2", Body.box(1, 2, make_field(1)), (F1(2, 10), F1(1, 10)))
    assert len(pr.terms) == 1 and pr.value == pr.engine_value
    from pizza.coxeter import enumerate_group
    from pizza.roots import arrangement

    Ar = arrangement("I2(4)xA1")
    W = enumerate_group(Ar.positive)
    F = Ar.system.field
    K = Body.orbit_polytope((F(2), F(Fraction(1, 2)), F(1)), W)
    pr = product_reduction("I2(4)xA1", K, (F1(3, 10), F1(1, 10), F1(2, 10)))
    assert pr.containment and pr.value == 0 and pr.engine_value == 0 and pr.certified_zero


def test_shares_m2_disc():
    F = DihedralFrame.of(2).field
    for r in (0, 1):
        rep = hirschhorn_shares(2, r, Body.ball(F(1)), (Fraction(2, 10), Fraction(1, 10)), n_samples=10**6, seed=7)
        assert rep.ok and rep.inner_equal and rep.verdict.ok
        assert abs(rep.areas[0] - np.pi / 2) <= 4 * rep.stderr[0]


def test_shares_polygon_exact():
    from pizza.coxeter import enumerate_group
    from pizza.roots import arrangement

    Ar = arrangement("I2(8)")
    W = enumerate_group(Ar.positive)
    F = Ar.system.field
    K = Body.orbit_polytope((F(2), F(Fraction(1, 2))), W)
    rep = hirschhorn_shares(4, 1, K, (Fraction(2, 10), Fraction(1, 10)))
    assert rep.ok and rep.diff == 0


def test_shares_input_checks():
    F = DihedralFrame.of(3).field
    with pytest.raises(DomainError):
        hirschhorn_shares(3, 0, Body.ball(F(1)), A)
    F = DihedralFrame.of(2).field
    with pytest.raises(DomainError):
        hirschhorn_shares(2, 5, Body.ball(F(1)), A)
    with pytest.raises(HypothesisError):
        hirschhorn_shares(2, 0, Body.ball(F(Fraction(1, 10))), A)


def test_halfopen_region_is_used_for_sectors():
    fr = DihedralFrame.of(2)
    assert isinstance(fr.sector(0), HalfOpenRegion)
    assert fr.sector(0).intersect(fr.sector(1)).is_empty()
