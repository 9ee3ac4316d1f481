"""Explicit dissections for the dihedral arrangement I2(2m).

Conventions
-----------
theta0 = pi/2m and u_k = (cos k theta0, sin k theta0) for every integer k,
so u_{k+2m} = -u_k.  The 2m lines L_i = R u_i (0 <= i < 2m) cut the plane
into 4m open sectors T_i between angles i theta0 and (i+1) theta0, with
sign (-1)^i.  The translate a is canonical when it lies in T_{m-1}.

W_a is the group generated by reflections in the lines L_i + a and
R0 = conv(W_a 0).  P_i = 2(a, u_i) u_i is the image of 0 under the
reflection in L_i^perp + a and lies on L_i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .certificate import DissectionCertificate, verify_certificate
from .errors import DomainError
from .field import FieldSpec, embed_cos, embed_sin, make_field
from .isometry import (AffineIsometry, from_point_pairs, reflection_in_line,
                       rotation, rotation_matrix, line_reflection_matrix)
from .linalg import dot, matvec, transpose, vadd, vscale, vsub
from .regions import Constraint, HalfOpenRegion, RegionSet, hull_region, order_polygon


class PlacementError(DomainError):
    """a is not in the canonical chamber T_{m-1} (or lies on a line)."""


def _cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


@dataclass
class DihedralFrame:
    """Exact data for I2(2m) in the field Q(2cos(pi/2m))."""

    m: int
    field: FieldSpec

    @classmethod
    def of(cls, m: int) -> "DihedralFrame":
        if m < 2:
            raise DomainError("the dihedral constructions need m >= 2")
        return cls(m, make_field(2 * m))

    def u(self, k: int) -> tuple:
        return (embed_cos(self.field, k, 2 * self.m), embed_sin(self.field, k, 2 * self.m))

    def cos0(self):
        return embed_cos(self.field, 1, 2 * self.m)

    def sector(self, i: int, closed: bool = False) -> HalfOpenRegion:
        """Open (or closed) sector T_i, indices mod 4m."""
        return cone((self.field.zero, self.field.zero), self.u(i), self.u(i + 1), self.m, i, i + 1,
                    strict=not closed, F=self.field)

    def sign(self, i: int) -> int:
        return -1 if i % 2 else 1

    def group(self) -> list:
        """The 4m matrices of W0 as (matrix, det) pairs."""
        out = []
        for k in range(2 * self.m):
            out.append((rotation_matrix(self.field, 2 * k, 2 * self.m), 1))
        for k in range(2 * self.m):
            out.append((line_reflection_matrix(self.u(k)), -1))
        return out


def cone(apex, d1, d2, m: int, k1: int, k2: int, strict: bool = True, F: Optional[FieldSpec] = None) -> HalfOpenRegion:
    """apex + open cone spanned by u_{k1}, u_{k2} (counter-clockwise, angle < pi).

    ``d1``/``d2`` are the exact vectors u_{k1}/u_{k2}; the inward normals
    are u_{k1+m} and u_{k2+3m}.
    """
    fr = DihedralFrame(m, F or d1[0].field)
    n1, n2 = fr.u(k1 + m), fr.u(k2 + 3 * m)
    apex = tuple(apex)
    return HalfOpenRegion(2, [Constraint(n1, dot(n1, apex), strict), Constraint(n2, dot(n2, apex), strict)],
                          fr.field)


def open_ray(fr: DihedralFrame, P, k: int) -> HalfOpenRegion:
    """{P + t u_k : t > 0}."""
    d, n = fr.u(k), fr.u(k + fr.m)
    c = dot(n, P)
    return HalfOpenRegion(2, [Constraint(n, c), Constraint(tuple(-x for x in n), -c),
                              Constraint(d, dot(d, P), True)], fr.field)


def polygon_region(verts: Sequence, strict: Sequence[bool], F: FieldSpec) -> HalfOpenRegion:
    """Convex polygon from its vertices; ``strict[i]`` flags edge (v_i, v_{i+1})."""
    verts = [tuple(v) for v in verts]
    n = len(verts)
    area2 = sum((_cross(verts[i], verts[(i + 1) % n]) for i in range(n)), F.zero)
    if area2.sign() == 0:
        raise DomainError("degenerate polygon")
    if area2.sign() < 0:
        verts = verts[::-1]
        # edge i of the reversed list is edge n-2-i of the original
        strict = [strict[(n - 2 - i) % n] for i in range(n)]
    cons = []
    for i in range(n):
        p, q = verts[i], verts[(i + 1) % n]
        e = vsub(q, p)
        nrm = (-e[1], e[0])
        cons.append(Constraint(nrm, dot(nrm, p), bool(strict[i])))
    return HalfOpenRegion(2, cons, F).mark_bounded()


def line_side(p, q, keep, F: FieldSpec, strict: bool) -> Constraint:
    """Half-plane bounded by line pq containing the point ``keep``."""
    e = vsub(q, p)
    nrm = (-e[1], e[0])
    if (dot(nrm, keep) - dot(nrm, p)).sign() < 0:
        nrm = (e[1], -e[0])
    return Constraint(nrm, dot(nrm, p), strict)


def as_vector(a, F: FieldSpec) -> tuple:
    return tuple(F(x) if not hasattr(x, "field") else x for x in a)


# ---------------------------------------------------------------------------
# placement

def chamber_index(fr: DihedralFrame, a) -> Optional[int]:
    """Index i of the open sector T_i containing a, or None on a line."""
    for i in range(4 * fr.m):
        if fr.sector(i).contains(a):
            return i
    return None


def canonicalize(fr: DihedralFrame, a):
    """(w, det) in W0 with w(a) in T_{m-1}; raises PlacementError on a line."""
    if chamber_index(fr, a) is None:
        raise PlacementError("a lies on a line of the arrangement; pass degenerate=True to allow it")
    target = fr.sector(fr.m - 1)
    for M, d in fr.group():
        if target.contains(matvec(M, a)):
            return M, d
    raise PlacementError("no element of W0 moves a into T_{m-1}")


def _check_canonical(fr: DihedralFrame, a, degenerate: bool) -> None:
    if fr.sector(fr.m - 1).contains(a):
        return
    if degenerate and fr.sector(fr.m - 1, closed=True).contains(a) and any(a):
        return
    raise PlacementError(f"a must lie in the open chamber T_{fr.m - 1} between L_{fr.m - 1} and L_{fr.m}; "
                         "rotate it there with canonicalize() first")


# ---------------------------------------------------------------------------
# R0

@dataclass
class R0Data:
    frame: DihedralFrame
    a: tuple
    region: HalfOpenRegion
    orbit: list
    vertices: list
    P: list  # P_i for 0 <= i < 2m


def wa_orbit(fr: DihedralFrame, a, p) -> list:
    """W_a-orbit of p: the points a + w(p - a)."""
    d = vsub(p, a)
    return [vadd(a, matvec(M, d)) for M, _ in fr.group()]


def build_R0(m: int, a, strict: bool = False, degenerate: bool = False) -> R0Data:
    """R0(a) = conv(W_a 0) as an exact H-representation plus the points P_i.

    ``strict=True`` returns the interior instead of the closed polygon.
    """
    fr = DihedralFrame.of(m)
    F = fr.field
    a = as_vector(a, F)
    _check_canonical(fr, a, degenerate)
    zero = (F.zero, F.zero)
    orbit = list(dict.fromkeys(wa_orbit(fr, a, zero)))
    R = hull_region(orbit, F)
    if strict:
        R = R._inherit(HalfOpenRegion(2, [Constraint(c.normal, c.offset, True) for c in R.constraints], F))
    verts = order_polygon(R.closure().vertices()) if strict else order_polygon(R.vertices())
    P = [vscale(2 * dot(a, fr.u(i)), fr.u(i)) for i in range(2 * m)]
    return R0Data(fr, a, R, orbit, verts, P)


def proxy_polygon(fr: DihedralFrame, a) -> HalfOpenRegion:
    """A W_a-stable polygon well outside R0(a), used to measure unbounded pieces."""
    F = fr.field
    r = int(math.ceil(8 * (abs(float(a[0])) + abs(float(a[1])) + 1)))
    p = vadd(a, (F(r), F(Fraction(r, 7))))
    return hull_region(list(dict.fromkeys(wa_orbit(fr, a, p))), F)


# ---------------------------------------------------------------------------
# outer cancellation

def _outer_canonical(r0: R0Data) -> DissectionCertificate:
    fr, a, F, m = r0.frame, r0.a, r0.frame.field, r0.frame.m
    P = r0.P
    R0 = RegionSet.of(r0.region)
    cert = DissectionCertificate("outer", F, proxy=proxy_polygon(fr, a),
                                 params={"m": m, "a": a})
    for j in range(m):
        i0, i1 = 2 * j, 2 * j + 1
        Pj = P[i1]
        # pieces of -T_i and their reflected partners near P_{2j+1}
        cert.add_piece(f"R{i0}+", fr.sector(i0 + 2 * m), f"R_{{{i0},+}}", 1, i0 + 2 * m)
        cert.add_piece(f"R{i1}-", fr.sector(i1 + 2 * m), f"R_{{{i1},-}}", -1, i1 + 2 * m)
        cert.add_piece(f"R{i0}-", cone(Pj, fr.u(i1), fr.u(i1 + 1), m, i1, i1 + 1, F=F), f"R_{{{i0},-}}", -1, i1)
        cert.add_piece(f"R{i1}+", cone(Pj, fr.u(i0), fr.u(i1), m, i0, i1, F=F), f"R_{{{i1},+}}", 1, i0)
        # the last ray starts at the vertex of R0 reflected from P_1 in L_m + a
        D0 = open_ray(fr, Pj if j < m - 1 else reflection_in_line(a, fr.u(m))(P[1]), i0)
        D1 = open_ray(fr, Pj, i1 + 1)
        cert.add_piece(f"D{i0}", D0, f"D_{{{i0}}}", 1, i0)
        cert.add_piece(f"D{i1}", D1, f"D_{{{i1}}}", -1, i1)
        Sp = RegionSet.of(fr.sector(i0)).difference(R0).difference(cert.pieces[f"R{i1}+"].region.closure_pieces())
        Sm = RegionSet.of(fr.sector(i1)).difference(R0).difference(cert.pieces[f"R{i0}-"].region.closure_pieces())
        cert.add_piece(f"S{j}+", Sp.nonempty(), f"S_{{{j},+}}", 1, i0)
        cert.add_piece(f"S{j}-", Sm.nonempty(), f"S_{{{j},-}}", -1, i1)
        for i in (i0, i1):
            cert.pair(f"R{i}+", f"R{i}-", reflection_in_line(a, fr.u(i1 + m), f"reflection in L_{i1}^perp + a"))
        cert.pair(f"S{j}+", f"S{j}-", rotation(a, 2, 2 * m, F, "rotation center a angle pi/m"))
    for j in range(m - 1):
        cert.pair(f"D{2 * j}", f"D{2 * j + 3}", rotation(a, 4, 2 * m, F, "rotation center a angle 2pi/m"))
    cert.pair(f"D{2 * m - 2}", "D1", reflection_in_line(a, fr.u(m), f"reflection in L_{m} + a"))
    # partition claims
    for j in range(m):
        i0, i1 = 2 * j, 2 * j + 1
        cert.claim(f"T{i0} - R0", RegionSet.of(fr.sector(i0)).difference(R0), [f"R{i1}+", f"S{j}+", f"D{i0}"])
        cert.claim(f"T{i1} - R0", RegionSet.of(fr.sector(i1)).difference(R0), [f"R{i0}-", f"S{j}-", f"D{i1}"])
    for i in range(2 * m):
        s = "+" if i % 2 == 0 else "-"
        cert.claim(f"T{i + 2 * m} - R0", RegionSet.of(fr.sector(i + 2 * m)).difference(R0), [f"R{i}{s}"])
    return cert


# ---------------------------------------------------------------------------
# Frederickson's dissection of R0

def _frederickson_canonical(r0: R0Data) -> DissectionCertificate:
    fr, a, F, m = r0.frame, r0.a, r0.frame.field, r0.frame.m
    P = r0.P
    zero = (F.zero, F.zero)
    c0 = fr.cos0()
    R0 = r0.region
    cert = DissectionCertificate("frederickson", F, params={"m": m, "a": a})

    def X(k):
        e = k if k % 2 == 0 else k + 1
        o = k + 1 if k % 2 == 0 else k
        return e, o, vscale(dot(a, fr.u(e)) / c0, fr.u(o))

    # Q'_k for 0 <= k <= 2m-3
    for k in range(2 * m - 2):
        e, o, Xk = X(k)
        cut = line_side(P[e], Xk, zero, F, False).complement()
        Q = fr.sector(k).add(*[c.weak() for c in R0.constraints]).add(cut)
        cert.add_piece(f"Q{k}", Q, f"Q'_{{{k}}}", 1 if k % 2 == 0 else -1, k)
    # B'_{i,+} for i <= m-2 in T_{2i}; B'_{i,-} for 1 <= i <= m-2 in T_{2i-1}
    for i in range(m - 1):
        e, o, Xk = X(2 * i)
        B = fr.sector(2 * i).add(line_side(P[e], Xk, zero, F, False)).mark_bounded()
        cert.add_piece(f"B{i}+", B, f"B'_{{{i},+}}", 1, 2 * i)
        if i >= 1:
            e, o, Xk = X(2 * i - 1)
            B = fr.sector(2 * i - 1).add(line_side(P[e], Xk, zero, F, False)).mark_bounded()
            cert.add_piece(f"B{i}-", B, f"B'_{{{i},-}}", -1, 2 * i - 1)
    # big triangle on [0, P_{2m-2}] with apex Y on L_{2m-3}
    k = 2 * m - 3
    _, _, Y = X(k)
    Pt = P[2 * m - 2]
    # lambda = |P_0| / |P_{2m-2}| and |P_i| = 2(a, u_i)
    lam = dot(a, fr.u(0)) / dot(a, fr.u(2 * m - 2))
    C1 = vscale(1 - lam, Y)
    C2 = vadd(Y, vscale(lam, vsub(Pt, Y)))
    cut_big = line_side(Pt, Y, zero, F, False)
    cut_c = line_side(C1, C2, zero, F, False)
    trap = fr.sector(k).add(cut_big, cut_c).mark_bounded()
    top = fr.sector(k).add(cut_big, cut_c.complement()).mark_bounded()
    cert.add_piece(f"B{m - 1}-", trap, f"B'_{{{m - 1},-}}", -1, k)
    cert.add_piece("B0-", top, "B'_{0,-}", -1, k)
    refl_t = reflection_in_line(zero, fr.u(2 * m - 2), f"reflection in L_{2 * m - 2}")
    cert.add_piece(f"B{m - 1}+", refl_t.apply_region(trap), f"B'_{{{m - 1},+}}", 1, 2 * m - 2)
    # pairings
    X0 = X(0)[2]
    g0 = from_point_pairs([zero, P[0], X0], [C1, C2, Y], "three-point isometry X_0->Y, P_0->C2, 0->C1")
    cert.pair("B0+", "B0-", g0)
    for i in range(1, m - 1):
        cert.pair(f"B{i}+", f"B{i}-", reflection_in_line(zero, fr.u(2 * i), f"reflection in L_{2 * i}"))
    cert.pair(f"B{m - 1}+", f"B{m - 1}-", reflection_in_line(zero, fr.u(2 * m - 2), f"reflection in L_{2 * m - 2}"))
    for j in range(m - 1):
        cert.pair(f"Q{2 * j}", f"Q{2 * j + 1}", rotation(a, 2, 2 * m, F, "rotation center a angle pi/m"))
    # partition claims
    plus = RegionSet([R0.intersect(fr.sector(i)) for i in range(0, 4 * m, 2)], 2).nonempty()
    minus = RegionSet([R0.intersect(fr.sector(i)) for i in range(1, 4 * m, 2)], 2).nonempty()
    cert.claim("R0+", plus, [f"B{i}+" for i in range(m)] + [f"Q{2 * j}" for j in range(m - 1)])
    cert.claim("R0-", minus, [f"B{i}-" for i in range(m)] + [f"Q{2 * j + 1}" for j in range(m - 1)])
    cert.params.update({"C1": C1, "C2": C2, "Y": Y})
    return cert


# ---------------------------------------------------------------------------
# public constructors

def _transport(cert: DissectionCertificate, M, d: int) -> DissectionCertificate:
    """Image of a certificate under the orthogonal map M (det d)."""
    if M is None:
        return cert
    F = cert.field
    zero = (F.zero, F.zero)
    out = DissectionCertificate(cert.kind, F, mode=cert.mode,
                                proxy=cert.proxy.transform(M, zero) if cert.proxy is not None else None,
                                params=dict(cert.params))
    out.params["a"] = matvec(M, cert.params["a"])
    for p in cert.pieces.values():
        out.add_piece(p.id, p.region.transform(M, zero), p.label, p.side * d, p.chamber)
    for q in cert.pairings:
        g = q.isometry.conjugate(M)
        if d < 0:
            out.pair(q.dst, q.src, g.inverse())
        else:
            out.pair(q.src, q.dst, g)
    for c in cert.claims:
        out.claim(c.name, c.region.transform(M, zero), c.piece_ids)
    return out


def _prepare(m: int, a, auto_rotate: bool):
    fr = DihedralFrame.of(m)
    F = fr.field
    a = as_vector(a, F)
    if fr.sector(m - 1).contains(a):
        return a, None, 1
    if not auto_rotate:
        _check_canonical(fr, a, False)
    M, d = canonicalize(fr, a)
    return matvec(M, a), M, d


def outer_cancellation_certificate(m: int, a, auto_rotate: bool = True) -> DissectionCertificate:
    """Pairings that cancel the signed pieces of the chambers outside R0(a)."""
    a0, M, d = _prepare(m, a, auto_rotate)
    cert = _outer_canonical(build_R0(m, a0))
    return _transport(cert, transpose(M), d) if M is not None else cert


def frederickson_certificate(m: int, a, auto_rotate: bool = True) -> DissectionCertificate:
    """Half-open dissection of R_{0,+}(a) and R_{0,-}(a) into congruent pieces."""
    a0, M, d = _prepare(m, a, auto_rotate)
    cert = _frederickson_canonical(build_R0(m, a0))
    return _transport(cert, transpose(M), d) if M is not None else cert


# ---------------------------------------------------------------------------
# consequences checked exactly

def _angle_cos2(F, P, Q1, Q2):
    """(sign, cos^2) of the angle Q1 P Q2."""
    v, w = vsub(Q1, P), vsub(Q2, P)
    d = dot(v, w)
    return d.sign(), d * d / (dot(v, v) * dot(w, w))


def _vertex_angle(R: HalfOpenRegion, P):
    """(sign, cos^2) of the interior angle of the closed polygon R at its vertex P."""
    V = order_polygon(R.closure().vertices())
    i = V.index(tuple(P))
    return _angle_cos2(R.field, P, V[i - 1], V[(i + 1) % len(V)])


def angle_checks(m: int, a) -> list:
    """Angles of the quadrilaterals Q_{i-1}, Q_i at P_i against their closed forms.

    Returns ``(i, which, k, ok)`` rows where the expected angle is k pi/2m.
    """
    a0, _, _ = _prepare(m, a, True)
    r0 = build_R0(m, a0)
    cert = _frederickson_canonical(r0)
    F = r0.frame.field
    rows = []
    for i in range(1, 2 * m - 2):
        k_prev = i - 1 if i % 2 == 0 else i
        k_next = 2 * m - 2 - i if i % 2 == 0 else 2 * m - 1 - i
        for which, q, k in (("prev", i - 1, k_prev), ("next", i, k_next)):
            R = cert.pieces[f"Q{q}"].region.pieces[0]
            s, c2 = _vertex_angle(R, r0.P[i])
            c = embed_cos(F, k, 2 * m)
            rows.append((i, which, k, s == c.sign() and c2 == c * c))
    return rows


def q_chain_check(m: int, a) -> list:
    """Closed Q_i equals the rotation of closed Q_{i-1} about a by pi/m, for 1 <= i <= 2m-3."""
    a0, _, _ = _prepare(m, a, True)
    r0 = build_R0(m, a0)
    cert = _frederickson_canonical(r0)
    g = rotation(r0.a, 2, 2 * m, r0.frame.field)
    out = []
    for i in range(1, 2 * m - 2):
        src = cert.pieces[f"Q{i - 1}"].region.closure_pieces()
        dst = cert.pieces[f"Q{i}"].region.closure_pieces()
        out.append((i, g.apply_region(src).equals(dst)))
    return out


@dataclass
class ImpliedSum:
    pieces_value: object  # sum of side * vol(piece cap L) over both certificates
    engine_value: object  # alternating chamber sum recomputed by the engine
    ok: bool


def implied_sum(m: int, a, K: Optional[HalfOpenRegion] = None, outer=None, fred=None) -> ImpliedSum:
    """Recompute sum_T (-1)^T vol(T cap (K + a)) two ways and check both vanish.

    ``K`` is a W-stable polygon centered at 0 containing R0(a) - a; by
    default the certificate proxy moved back to the origin.
    """
    from .engine import Body, pizza_sum
    from .roots import arrangement

    fr = DihedralFrame.of(m)
    F = fr.field
    a = as_vector(a, F)
    outer = outer or outer_cancellation_certificate(m, a)
    fred = fred or frederickson_certificate(m, a)
    if K is None:
        L = outer.proxy
        K = L.translate(tuple(-x for x in a))
    else:
        L = K.translate(a)
    total = F.zero
    for cert in (outer, fred):
        for p in cert.pieces.values():
            v = p.region.intersect(L).volume()
            total = total + (v if p.side > 0 else -v)
    A = arrangement(f"I2({2 * m})")
    res = pizza_sum(A, Body.polytope(K), a, method="exact")
    return ImpliedSum(total, res.value, not total and not res.value)


# ---------------------------------------------------------------------------
# product reduction

def r0_hull(fr: DihedralFrame, a) -> HalfOpenRegion:
    """R0(a) for any a (no placement requirement)."""
    zero = (fr.field.zero, fr.field.zero)
    return hull_region(list(dict.fromkeys(wa_orbit(fr, a, zero))), fr.field)


def _down(v, F: FieldSpec) -> tuple:
    """Move a vector into the subfield F (rational or already in F)."""
    out = []
    for x in v:
        if x.field.N == F.N:
            out.append(F(x.coeffs[0]) if x.is_rational() else x)
        elif x.is_rational():
            out.append(F(x.as_rational()))
        else:
            raise DomainError("factor coordinates of a must be rational to certify in a subfield")
    return tuple(out)


def _embed(region: HalfOpenRegion, start: int, n: int) -> HalfOpenRegion:
    """Cylinder over a block region: constraints padded with zeros to dimension n."""
    F = region.field
    z = F.zero
    cons = []
    for c in region.constraints:
        nrm = [z] * n
        nrm[start:start + region.dim] = c.normal
        cons.append(Constraint(tuple(nrm), c.offset, c.strict))
    return HalfOpenRegion(n, cons, F)


@dataclass
class ProductReduction:
    terms: object  # SignedRegionList
    value: object
    engine_value: object
    sign_offset: int
    containment: bool
    certificates: list  # Frederickson certificates of the dihedral factors
    certified_zero: bool


def product_reduction(spec: str, K, a, certify: bool = True) -> ProductReduction:
    """Signed product list for an arrangement of A1 and I2(2m) factors.

    The alternating sum over K + a reduces to sum over eps of
    prod(eps_j) [S_1 x ... x S_r x R_{eps_1} x ... x R_{eps_s}], where S_i
    is the half-open segment (0, 2(a, e_i) e_i] of an A1 factor and
    R_{eps}(a_j) the part of R0(a_j) in chambers of sign eps.  Requires the
    product polytope to lie in K + a, which is checked exactly.
    """
    from itertools import product as iproduct

    from .coxeter import chamber_sign_at, enumerate_group
    from .engine import Body, HypothesisError, SignedRegionList, is_w_stable, pizza_sum
    from .roots import arrangement, build_system

    S = build_system(spec)
    A = arrangement(S)
    F = S.field
    n = S.ambient_dim
    if n > 4:
        raise DomainError("product reduction is checked exactly up to dimension 4")
    a = S.vector(a)
    Kr = K.region if hasattr(K, "region") else K
    W = enumerate_group(A.positive)
    if not is_w_stable(Kr, W):
        raise HypothesisError("K is not stable under the reflections of the arrangement")
    L = Kr.translate(a)
    pos = A.positive
    factors = []  # (kind, start, data)
    rep = [F.zero] * n
    for b in S.blocks:
        roots = [r[b.start:b.stop] for r in S.roots if any(r[b.start:b.stop])]
        ab = a[b.start:b.stop]
        if b.stop - b.start == 1:
            e = next(r for r in pos.positive_roots if any(r[b.start:b.stop]))[b.start:b.stop]
            c = 2 * dot(ab, e)
            if not c:
                raise HypothesisError("a lies on the wall of an A1 factor")
            lo, hi = (F.zero, c * e[0]) if e[0].sign() > 0 else (c * e[0], F.zero)
            seg_strict_lo = (c.sign() > 0) == (e[0].sign() > 0)
            seg = HalfOpenRegion(1, [Constraint((F.one,), lo, seg_strict_lo),
                                     Constraint((-F.one,), -hi, not seg_strict_lo)], F)
            factors.append(("A1", b.start, (seg, c.sign(), [(lo,), (hi,)])))
            rep[b.start] = e[0]
        elif b.stop - b.start == 2 and len(roots) % 4 == 0:
            m = len(roots) // 4
            fr = DihedralFrame(m, F)
            if set(map(tuple, roots)) != {fr.u(k) for k in range(4 * m)}:
                raise DomainError(f"block {b.label} is not I2({2 * m}) in standard position")
            if chamber_index(fr, ab) is None:
                raise HypothesisError(f"a lies on a line of the factor {b.label}")
            R0 = r0_hull(fr, ab)
            parts = {eps: [R0.intersect(fr.sector(i)) for i in range(4 * m) if fr.sign(i) == eps]
                     for eps in (1, -1)}
            factors.append(("I2", b.start, (fr, parts, order_polygon(R0.vertices()), m, ab)))
            mid = vadd(fr.u(0), fr.u(1))
            rep[b.start], rep[b.start + 1] = mid
        else:
            raise DomainError(f"factor {b.label} is neither A1 nor a dihedral I2(2m)")
    sign_offset = chamber_sign_at(A, tuple(rep))
    # containment of the product polytope in L
    vert_lists = [f[2][2] if f[0] == "A1" else f[2][2] for f in factors]
    contained = True
    for combo in iproduct(*vert_lists):
        v = [F.zero] * n
        for f, pt in zip(factors, combo):
            v[f[1]:f[1] + len(pt)] = pt
        if not L.contains(tuple(v)):
            contained = False
            break
    if not contained:
        raise HypothesisError("the product of the segments and the R0 polygons is not contained in K + a")
    # signed terms
    terms = SignedRegionList()
    dihedral = [f for f in factors if f[0] == "I2"]
    base = HalfOpenRegion(n, [], F)
    coef0 = sign_offset
    for f in factors:
        if f[0] == "A1":
            base = base.intersect(_embed(f[2][0], f[1], n))
            coef0 *= f[2][1]
    for eps in iproduct((1, -1), repeat=len(dihedral)):
        choices = [f[2][1][e] for f, e in zip(dihedral, eps)]
        sgn = coef0
        for e in eps:
            sgn *= e
        for combo in iproduct(*choices):
            R = base
            for f, piece in zip(dihedral, combo):
                R = R.intersect(_embed(piece, f[1], n))
            terms.append(sgn, R.mark_bounded(), "x".join(f"{'+' if e > 0 else '-'}" for e in eps))
    value = terms.evaluate("volume")
    engine = pizza_sum(A, Body.polytope(Kr), a, method="exact", W=W).value
    certs = []
    ok = bool(dihedral)
    if certify:
        for f in dihedral:
            fr, m, ab = f[2][0], f[2][3], f[2][4]
            cert = frederickson_certificate(m, _down(ab, make_field(2 * m)))
            v = verify_certificate(cert)
            certs.append((cert, v))
            ok = ok and v.ok and cert.side_volume(1) == cert.side_volume(-1)
    return ProductReduction(terms, value, engine, sign_offset, contained, certs,
                            ok and certify and value == engine and not value)


# ---------------------------------------------------------------------------
# shares: every m-th slice

def share_chambers(m: int, r: int) -> list:
    """Indices of the four sectors T_{r + i m} of share r."""
    return sorted({(r + i * m) % (4 * m) for i in range(4)})


def _sigma(fr: DihedralFrame, a, k: int) -> AffineIsometry:
    return reflection_in_line(a, fr.u(k + fr.m), f"reflection in L_{k % (2 * fr.m)}^perp + a")


def _odd_share_system(r0: R0Data) -> DissectionCertificate:
    """Primed pieces R', S' for the odd shares, over every sector, with their pairings."""
    fr, a, F, m = r0.frame, r0.a, r0.frame.field, r0.frame.m
    R0 = RegionSet.of(r0.region)
    cert = DissectionCertificate("share-odd", F, mode="mod_boundary", proxy=proxy_polygon(fr, a),
                                 params={"m": m, "a": a})
    # lower sectors -T_i for i <= 2m-2 are single pieces
    for i in range(2 * m - 1):
        s = "+" if i % 2 == 0 else "-"
        cert.add_piece(f"R{i}{s}", fr.sector(i + 2 * m), f"R_{{{i},{s}}}", fr.sign(i), i + 2 * m)
    for j in range(1, m):
        Rm = _sigma(fr, a, 2 * j).apply_region(fr.sector(2 * j + 2 * m))
        Rp = _sigma(fr, a, 2 * j).apply_region(fr.sector(2 * j - 1 + 2 * m))
        cert.add_piece(f"R'{2 * j}-", Rm, f"R'_{{{2 * j},-}}", -1, 2 * j - 1)
        cert.add_piece(f"R'{2 * j - 1}+", Rp, f"R'_{{{2 * j - 1},+}}", 1, 2 * j)
    cert.add_piece("R'0-", _sigma(fr, a, 0).apply_region(fr.sector(2 * m)), "R'_{0,-}", -1, 4 * m - 1)
    cert.add_piece(f"R'{2 * m - 1}-", fr.sector(2 * m - 1), f"R'_{{{2 * m - 1},-}}", -1, 2 * m - 1)
    cert.add_piece(f"R'{2 * m - 1}+", _sigma(fr, a, 0).apply_region(fr.sector(2 * m - 1)),
                   f"R'_{{{2 * m - 1},+}}", 1, 0)
    # residual strips
    homes = {0: ("+", 0, f"R'{2 * m - 1}+"), -1: ("-", 4 * m - 1, "R'0-")}
    for j in range(1, m):
        homes[j] = ("+", 2 * j, f"R'{2 * j - 1}+")
        homes[-j - 1] = ("-", 2 * j - 1, f"R'{2 * j}-")
    for key, (s, c, rid) in sorted(homes.items()):
        j = key if key >= 0 else -key - 1
        S_ = RegionSet.of(fr.sector(c)).difference(R0).difference(cert.pieces[rid].region.closure_pieces())
        cert.add_piece(f"S'{j}{s}", S_.nonempty(), f"S'_{{{j},{s}}}", 1 if s == "+" else -1, c)
    # pairings
    for j in range(m):
        cert.pair(f"R{2 * j}+", f"R'{2 * j}-", _sigma(fr, a, 2 * j))
        cert.pair(f"S'{j}+", f"S'{j}-", rotation(a, -2, 2 * m, F, "rotation center a angle -pi/m"))
    for j in range(1, m):
        cert.pair(f"R'{2 * j - 1}+", f"R{2 * j - 1}-", _sigma(fr, a, 2 * j))
    cert.pair(f"R'{2 * m - 1}+", f"R'{2 * m - 1}-", _sigma(fr, a, 0))
    return cert


def _share_certificate(r0: R0Data, r: int, L: Optional[HalfOpenRegion]) -> DissectionCertificate:
    """Pairing certificate for (share r) - R0 against (share r+1) - R0, canonical a."""
    fr, m = r0.frame, r0.frame.m
    base = _outer_canonical(r0) if r % 2 == 0 else _odd_share_system(r0)
    chambers = set(share_chambers(m, r)) | set(share_chambers(m, r + 1))
    keep = {pid for pid, p in base.pieces.items() if p.chamber in chambers and not pid.startswith("D")}
    cert = DissectionCertificate("share", fr.field, mode="mod_boundary",
                                 proxy=None if L is not None else base.proxy,
                                 params={"m": m, "a": r0.a, "r": r})
    for pid in sorted(keep):
        p = base.pieces[pid]
        reg = p.region if L is None else p.region.intersect(L).nonempty()
        cert.add_piece(pid, reg, p.label, p.side, p.chamber)
    for q in base.pairings:
        if q.src in keep and q.dst in keep:
            cert.pair(q.src, q.dst, q.isometry)
    R0 = RegionSet.of(r0.region)
    for c in sorted(chambers):
        reg = RegionSet.of(fr.sector(c)).difference(R0)
        if L is not None:
            reg = reg.intersect(L)
        cert.claim(f"T{c} - R0", reg, sorted(pid for pid in keep if base.pieces[pid].chamber == c))
    return cert


@dataclass
class ShareReport:
    m: int
    r: int
    areas: list  # exact (polygon) or estimated (ball) area of each share
    stderr: Optional[list]
    diff: object  # area(share r) - area(share r+1)
    diff_stderr: Optional[float]
    inner_equal: bool  # R0 parts of the two shares have equal area, exactly
    certificate: DissectionCertificate
    verdict: object
    ok: bool


def _sector_index_float(m: int, x: np.ndarray) -> np.ndarray:
    ang = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2 * np.pi)
    return np.floor(ang / (np.pi / (2 * m))).astype(np.int64) % (4 * m)


def hirschhorn_shares(m: int, r: int, K, a, n_samples: int = 10**6, seed: int = 0,
                      verify: bool = True) -> ShareReport:
    """Compare share r (sectors T_{r+im}) with share r+1 on K + a.

    ``K`` is a Body (ball or W-stable polygon centered at 0).  Outside R0(a)
    the two shares are matched piece by piece; inside R0(a) their areas are
    compared exactly; total share areas are exact for polygons and Monte
    Carlo estimates for balls.
    """
    from .engine import HypothesisError, sample_body

    if m % 2:
        raise DomainError("shares are defined for I2(2m) with m even")
    if not 0 <= r < m:
        raise DomainError(f"share index must satisfy 0 <= r < m, got {r}")
    fr = DihedralFrame.of(m)
    F = fr.field
    a = as_vector(a, F)
    a0, M, d = _prepare(m, a, True)
    r0 = build_R0(m, a0)
    Mt = transpose(M) if M is not None else None
    zero = (F.zero, F.zero)
    if K.kind == "ball":
        rad = F(K.radius)
        if any(dot(vsub(v, a), vsub(v, a)) > rad * rad for v in r0_hull(fr, a).vertices()):
            raise HypothesisError("the disc K + a does not contain R0(a)")
        L = None
    elif K.kind == "polytope":
        L = K.region.translate(a)
        for v in r0_hull(fr, a).vertices():
            if not L.contains(v):
                raise HypothesisError("K + a does not contain R0(a)")
    else:
        raise DomainError(f"shares support ball and polygon bodies, not {K.kind}")

    # sector index map from the canonical frame to the given one
    def image(c):
        mid = vadd(fr.u(c), fr.u(c + 1))
        return chamber_index(fr, matvec(Mt, mid)) if Mt is not None else c

    want = {frozenset(share_chambers(m, r)), frozenset(share_chambers(m, r + 1))}
    r_can = next(s for s in range(m)
                 if {frozenset(image(c) for c in share_chambers(m, s)),
                     frozenset(image(c) for c in share_chambers(m, s + 1))} == want)
    L0 = L.transform(M, zero) if (L is not None and M is not None) else L
    cert = _share_certificate(r0, r_can, L0)
    inner = [sum((r0.region.intersect(fr.sector(c)).volume() for c in share_chambers(m, s)), F.zero)
             for s in (r_can, r_can + 1)]
    inner_equal = inner[0] == inner[1]
    if M is not None:
        cert = _transport(cert, Mt, d)
    verdict = verify_certificate(cert) if verify else None
    if L is not None:
        areas = [sum((fr.sector(c).intersect(L).volume() for c in share_chambers(m, s)), F.zero)
                 for s in range(m)]
        diff = areas[r] - areas[(r + 1) % m]
        ok = not diff and inner_equal and (verdict is None or verdict.ok)
        return ShareReport(m, r, areas, None, diff, None, inner_equal, cert, verdict, ok)
    # Monte Carlo on the disc
    af = np.array([float(x) for x in a])
    vol = K.float_volume(2)
    seqs = np.random.SeedSequence(seed).spawn(max(1, -(-n_samples // 10**6)))
    counts = np.zeros(m)
    dsum = dsq = 0.0
    left = n_samples
    for ss in seqs:
        k = min(10**6, left)
        left -= k
        x = sample_body(K, 2, k, np.random.default_rng(ss)) + af
        share = _sector_index_float(m, x) % m
        counts += np.bincount(share, minlength=m)
        X = (share == r).astype(float) - (share == (r + 1) % m).astype(float)
        dsum += X.sum()
        dsq += (X * X).sum()
    n = n_samples
    p = counts / n
    areas = [float(x) for x in vol * p]
    se = [float(x) for x in vol * np.sqrt(p * (1 - p) / n)]
    mean = dsum / n
    dse = vol * math.sqrt(max(dsq / n - mean * mean, 0.0) / n)
    diff = float(vol * mean)
    ok = abs(diff) <= 4 * dse and inner_equal and (verdict is None or verdict.ok)
    return ShareReport(m, r, areas, se, diff, dse, inner_equal, cert, verdict, ok)
