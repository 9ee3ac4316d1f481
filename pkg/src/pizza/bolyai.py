"""Translation dissections of parallelograms and rectangles, and box classes.

The planar constructions return ``mod_boundary`` certificates: closed
convex pieces, disjoint up to boundaries, moved by translations (or, for
triangles, half-turns).  ``kz_vector`` maps signed lists of boxes to the
invariant (chi, V_1, ..., V_n), which decides equality of box classes.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .certificate import DissectionCertificate, _interior
from .errors import DomainError
from .field import FieldSpec, make_field
from .isometry import AffineIsometry, rotation, translation
from .linalg import det, dot, inverse, rank, transpose, vadd, vscale, vsub
from .regions import Constraint, HalfOpenRegion, RegionSet, Surd, hull_region


def _vec(v, F: FieldSpec) -> tuple:
    return tuple(x if hasattr(x, "field") and x.field is F else F(x) for x in v)


@dataclass
class Parallelotope:
    """base + sum [0, 1] v_i (closed) or base + sum (0, 1] v_i (half-open)."""

    base: tuple
    edges: list
    closed: bool = True

    @classmethod
    def make(cls, base, edges, closed: bool = True, field: Optional[FieldSpec] = None) -> "Parallelotope":
        F = field or make_field(1)
        edges = [_vec(e, F) for e in edges]
        base = _vec(base, F)
        if edges and rank([list(e) for e in edges]) < len(edges):
            raise DomainError("parallelotope edges are linearly dependent")
        return cls(base, edges, closed)

    @classmethod
    def box(cls, lows, highs, closed: bool = True, field: Optional[FieldSpec] = None) -> "Parallelotope":
        """Axis-parallel box; coordinates with low == high are flat directions."""
        F = field or make_field(1)
        lows, highs = _vec(lows, F), _vec(highs, F)
        n = len(lows)
        edges = []
        for i in range(n):
            if highs[i] != lows[i]:
                e = [F.zero] * n
                e[i] = highs[i] - lows[i]
                edges.append(tuple(e))
        return cls(lows, edges, closed)

    @property
    def field(self) -> FieldSpec:
        return self.base[0].field

    @property
    def dim(self) -> int:
        return len(self.base)

    @property
    def rank(self) -> int:
        return len(self.edges)

    def is_rectangular(self) -> bool:
        return all(not dot(u, v) for u, v in combinations(self.edges, 2))

    def volume(self):
        """r-dimensional volume; exact |det| at full rank, else a Surd."""
        if self.rank == self.dim:
            d = det([list(e) for e in self.edges])
            return d if d.sign() >= 0 else -d
        G = [[dot(u, v) for v in self.edges] for u in self.edges]
        return Surd.sqrt(det(G)) if G else Surd.from_field(self.field.one)

    def region(self) -> HalfOpenRegion:
        """H-representation (full rank only)."""
        if self.rank != self.dim:
            raise DomainError("region() needs a full-rank parallelotope")
        F = self.field
        E = transpose([list(e) for e in self.edges])
        D = inverse(E)  # rows: dual basis, t_i = D_i (x - base)
        cons = []
        for row in D:
            row = tuple(row)
            c = dot(row, self.base)
            cons.append(Constraint(row, c, not self.closed))
            cons.append(Constraint(tuple(-x for x in row), -c - F.one, False))
        return HalfOpenRegion(self.dim, cons, F).mark_bounded()

    def vertices(self) -> list:
        out = [self.base]
        for e in self.edges:
            out = out + [vadd(p, e) for p in out]
        return out


# ---------------------------------------------------------------------------
# certificate plumbing

def _full_dim(R: RegionSet) -> bool:
    return not _interior(R).is_empty()


def _tidy(g: AffineIsometry) -> AffineIsometry:
    """Recover translation / half-turn provenance of a composed planar map."""
    F = g.translation[0].field
    n = g.dim
    if g.is_translation():
        return translation(g.translation, "translation")
    minus = all(g.linear[i][j] == (-F.one if i == j else F.zero) for i in range(n) for j in range(n))
    if minus and n == 2:
        c = vscale(F(1) / 2, g.translation)
        return rotation(c, 1, 1, F, "half-turn")
    return g


def compose(first: DissectionCertificate, second: DissectionCertificate, kind: str = "") -> DissectionCertificate:
    """Common refinement of X -> Y and Y -> Z into one certificate X -> Z."""
    F = first.field
    out = DissectionCertificate(kind or f"{first.kind}+{second.kind}", F, mode="mod_boundary",
                                translation_only=first.translation_only and second.translation_only)
    k = 0
    for p in first.pairings:
        q = first.pieces[p.dst].region
        ginv = p.isometry.inverse()
        for r in second.pairings:
            mid = q.intersect(second.pieces[r.src].region)
            if not _full_dim(mid):
                continue
            h = r.isometry
            out.add_piece(f"p{k}", ginv.apply_region(mid), f"p{k}", 1)
            out.add_piece(f"q{k}", h.apply_region(mid), f"q{k}", -1)
            out.pair(f"p{k}", f"q{k}", _tidy(h @ p.isometry))
            k += 1
    src = first.claims[0].region
    dst = second.claims[-1].region
    out.claim("source", src, [f"p{i}" for i in range(k)])
    out.claim("target", dst, [f"q{i}" for i in range(k)])
    out.params.update({k_: v for k_, v in first.params.items() if k_.startswith("source")})
    out.params.update({k_: v for k_, v in second.params.items() if k_.startswith("target")})
    return out


def reverse(cert: DissectionCertificate) -> DissectionCertificate:
    """The same dissection read from target to source."""
    out = DissectionCertificate(cert.kind, cert.field, mode=cert.mode, translation_only=cert.translation_only)
    for p in cert.pieces.values():
        out.add_piece(p.id, p.region, p.label, -p.side, p.chamber)
    for q in cert.pairings:
        out.pair(q.dst, q.src, _tidy(q.isometry.inverse()))
    for c in reversed(cert.claims):
        out.claim({"source": "target", "target": "source"}.get(c.name, c.name), c.region, c.piece_ids)
    return out


def moved_pieces(cert: DissectionCertificate) -> int:
    """Number of pairings that are not the identity."""
    return sum(1 for q in cert.pairings if any(q.isometry.translation) or not q.isometry.is_translation())


def _single(name: str, R: HalfOpenRegion, g: AffineIsometry, translation_only: bool) -> DissectionCertificate:
    F = R.field
    cert = DissectionCertificate(name, F, mode="mod_boundary", translation_only=translation_only)
    cert.add_piece("p0", R, "p0", 1)
    cert.add_piece("q0", g.apply_region(R), "q0", -1)
    cert.pair("p0", "q0", g)
    cert.claim("source", R, ["p0"])
    cert.claim("target", g.apply_region(R), ["q0"])
    return cert


def rect_region(corner, w, h, F: FieldSpec) -> HalfOpenRegion:
    corner = _vec(corner, F)
    return HalfOpenRegion.box(list(corner), [corner[0] + w, corner[1] + h], F).mark_bounded()


# ---------------------------------------------------------------------------
# parallelograms and rectangles

def parallelogram_to_rectangle(p: Parallelotope) -> DissectionCertificate:
    """Cut a parallelogram into strips along its first edge and slide them together.

    The target is the rectangle on the same base edge v1 with the height
    vector v2 - alpha v1, alpha = (v1, v2)/(v1, v1).  Strips are cut at
    t = k for integers k, where t is the coordinate along v1, and each is
    moved by -k v1.
    """
    if p.dim != 2 or p.rank != 2:
        raise DomainError("parallelogram_to_rectangle needs two independent edges in the plane")
    if not p.closed:
        raise DomainError("parallelogram_to_rectangle expects a closed parallelogram")
    F = p.field
    v1, v2 = p.edges
    alpha = dot(v1, v2) / dot(v1, v1)
    perp = vsub(v2, vscale(alpha, v1))
    target = Parallelotope(p.base, [v1, perp], True).region()
    source = p.region()
    ww = dot(v1, v1)
    t0 = dot(v1, p.base)
    lo = min(F.zero, alpha)
    hi = max(F.one, alpha + 1)
    # one strip of slack on each side; empty strips are skipped
    kmin = int(_floor(lo)) - 1
    kmax = int(_floor(hi)) + 2
    cert = DissectionCertificate("parallelogram-to-rectangle", F, mode="mod_boundary", translation_only=True,
                                 params={"source_area": source.volume(), "target_area": target.volume()})
    ids = []
    for k in range(kmin, kmax):
        # k <= t <= k+1 with t = (v1, x - base)/(v1, v1)
        strip = source.add(Constraint(v1, t0 + k * ww, False),
                           Constraint(tuple(-x for x in v1), -(t0 + (k + 1) * ww), False)).mark_bounded()
        if not _full_dim(RegionSet.of(strip)):
            continue
        g = translation(vscale(F(-k), v1), f"translation by {-k} v1")
        cert.add_piece(f"s{k}", strip, f"strip {k}", 1)
        cert.add_piece(f"t{k}", g.apply_region(strip), f"strip {k} moved", -1)
        cert.pair(f"s{k}", f"t{k}", g)
        ids.append(k)
    cert.claim("source", source, [f"s{k}" for k in ids])
    cert.claim("target", target, [f"t{k}" for k in ids])
    return cert


def _floor(x):
    from math import floor

    if x.is_rational():
        q = x.as_rational()
        return int(q.numerator // q.denominator)
    return floor(float(x))


def _three_piece(w1, h1, w2, F: FieldSpec) -> DissectionCertificate:
    """w1 x h1 -> w2 x h2 with w2 <= w1 <= 2 w2: one diagonal cut from (w1, 0) to (0, h2)."""
    h2 = w1 * h1 / w2
    d, e = w1 - w2, h2 - h1
    src = rect_region((0, 0), w1, h1, F)
    below = Constraint((-h2, -w1), -w1 * h2, False)
    above = below.complement().weak()
    left = Constraint((-F.one, F.zero), -w2, False)
    right = Constraint((F.one, F.zero), w2, False)
    pieces = [("A", src.add(below, left), translation((F.zero, F.zero), "identity translation")),
              ("B", src.add(below, right), translation((-w2, h1), "translation (-w2, h1)")),
              ("C", src.add(above), translation((-d, e), "translation (w2 - w1, h2 - h1)"))]
    cert = DissectionCertificate("rectangle-retile", F, mode="mod_boundary", translation_only=True)
    ids = []
    for name, R, g in pieces:
        R = R.mark_bounded()
        if not _full_dim(RegionSet.of(R)):
            continue
        cert.add_piece(name, R, name, 1)
        cert.add_piece(name + "'", g.apply_region(R), name + "'", -1)
        cert.pair(name, name + "'", g)
        ids.append(name)
    cert.claim("source", src, ids)
    cert.claim("target", rect_region((0, 0), w2, h2, F), [i + "'" for i in ids])
    return cert


def _halve(w1, h1, F: FieldSpec) -> DissectionCertificate:
    """w1 x h1 -> (w1/2) x (2 h1): the right half goes on top."""
    half = w1 / 2
    src = rect_region((0, 0), w1, h1, F)
    L = rect_region((0, 0), half, h1, F)
    R = rect_region((half, F.zero), half, h1, F)
    g = translation((-half, h1), "translation (-w/2, h)")
    cert = DissectionCertificate("rectangle-halve", F, mode="mod_boundary", translation_only=True)
    cert.add_piece("L", L, "L", 1)
    cert.add_piece("L'", L, "L'", -1)
    cert.add_piece("R", R, "R", 1)
    cert.add_piece("R'", g.apply_region(R), "R'", -1)
    cert.pair("L", "L'", translation((F.zero, F.zero), "identity translation"))
    cert.pair("R", "R'", g)
    cert.claim("source", src, ["L", "R"])
    cert.claim("target", rect_region((0, 0), half, 2 * h1, F), ["L'", "R'"])
    return cert


def rectangle_retile(w1, h1, w2, field: Optional[FieldSpec] = None) -> DissectionCertificate:
    """Translation dissection of [0, w1] x [0, h1] onto [0, w2] x [0, w1 h1 / w2].

    A single diagonal cut works when w2 <= w1 <= 2 w2; otherwise the wider
    rectangle is halved and stacked until that holds.
    """
    F = field or make_field(1)
    w1, h1, w2 = F(w1), F(h1), F(w2)
    if min(w1.sign(), h1.sign(), w2.sign()) <= 0:
        raise DomainError("rectangle sides must be positive")
    if w1 == w2:
        return _single("rectangle-retile", rect_region((0, 0), w1, h1, F),
                       translation((F.zero, F.zero), "identity translation"), True)
    if w1 < w2:
        return reverse(rectangle_retile(w2, w1 * h1 / w2, w1, F))
    steps = []
    w, h = w1, h1
    while w > 2 * w2:
        steps.append(_halve(w, h, F))
        w, h = w / 2, 2 * h
    if w != w2:
        steps.append(_three_piece(w, h, w2, F))
    cert = steps[0]
    for s in steps[1:]:
        cert = compose(cert, s, "rectangle-retile")
    cert.kind = "rectangle-retile"
    return cert


# ---------------------------------------------------------------------------
# convex polygons

def _triangle_to_parallelogram(A, B, C, F: FieldSpec) -> tuple:
    """Triangle with AB horizontal -> parallelogram on AB of half the height.

    The top triangle above the midline is turned by pi about the midpoint
    of AC.  Returns (certificate, parallelogram).
    """
    half = F(1) / 2
    M1 = vscale(half, vadd(A, C))
    tri = hull_region([A, B, C], F)
    ymid = M1[1]
    up = F.one if C[1] > A[1] else -F.one  # towards the apex
    low = tri.add(Constraint((F.zero, -up), -up * ymid, False)).mark_bounded()
    top = tri.add(Constraint((F.zero, up), up * ymid, False)).mark_bounded()
    g = rotation(M1, 1, 1, F, "half-turn about the midpoint of AC")
    cert = DissectionCertificate("triangle-to-parallelogram", F, mode="mod_boundary")
    cert.add_piece("low", low, "trapezoid", 1)
    cert.add_piece("low'", low, "trapezoid", -1)
    cert.add_piece("top", top, "top triangle", 1)
    cert.add_piece("top'", g.apply_region(top), "top triangle turned", -1)
    cert.pair("low", "low'", translation((F.zero, F.zero), "identity translation"))
    cert.pair("top", "top'", g)
    P = Parallelotope(A, [vsub(B, A), vscale(half, vsub(C, B))], True)
    cert.claim("source", tri, ["low", "top"])
    cert.claim("target", P.region(), ["low'", "top'"])
    return cert, P


def _horizontal_triangles(tri, F: FieldSpec) -> list:
    """Split a triangle by the horizontal line through its middle vertex."""
    A, B, C = sorted(tri, key=lambda p: p[1])
    if A[1] == B[1] or B[1] == C[1]:
        return [(A, B, C)]
    t = (B[1] - A[1]) / (C[1] - A[1])
    D = vadd(A, vscale(t, vsub(C, A)))
    return [(A, B, D), (B, D, C)]


def _with_base(tri) -> tuple:
    """Order a triangle with a horizontal side as (A, B, C), AB horizontal and A left of B."""
    P = list(tri)
    for i in range(3):
        p, q, r = P[i], P[(i + 1) % 3], P[(i + 2) % 3]
        if p[1] == q[1]:
            return (p, q, r) if p[0] < q[0] else (q, p, r)
    raise DomainError("triangle has no horizontal side")


def polygon_to_rectangle(vertices: Sequence, width=1, field: Optional[FieldSpec] = None) -> DissectionCertificate:
    """Convex polygon -> rectangle [0, width] x [0, area / width].

    Fan-triangulate, split each triangle into triangles with a horizontal
    side, turn each into a parallelogram and then a rectangle, retile it to
    the common width and stack the results.
    """
    F = field or make_field(1)
    pts = [_vec(v, F) for v in vertices]
    poly = hull_region(pts, F)
    V = poly.vertices()
    if len(V) != len(set(pts)) or not _full_dim(RegionSet.of(poly)):
        raise DomainError("polygon_to_rectangle needs the vertices of a non-degenerate convex polygon")
    from .regions import order_polygon

    V = order_polygon(V)
    width = F(width)
    total = DissectionCertificate("polygon-to-rectangle", F, mode="mod_boundary")
    k = 0
    y = F.zero
    for i in range(1, len(V) - 1):
        for tri in _horizontal_triangles((V[0], V[i], V[i + 1]), F):
            A, B, C = _with_base(tri)
            c1, P = _triangle_to_parallelogram(A, B, C, F)
            c2 = parallelogram_to_rectangle(P)
            w = B[0] - A[0]
            h = P.edges[1][1] if P.edges[1][1].sign() > 0 else -P.edges[1][1]
            corner = (A[0], min(A[1], A[1] + P.edges[1][1]))
            c3 = _single("move", rect_region(corner, w, h, F),
                         translation((-corner[0], -corner[1]), "translation to the origin"), True)
            c4 = rectangle_retile(w, h, width, F)
            h2 = w * h / width
            c5 = _single("stack", rect_region((0, 0), width, h2, F),
                         translation((F.zero, y), "translation onto the stack"), True)
            chain = c1
            for c in (c2, c3, c4, c5):
                chain = compose(chain, c)
            y = y + h2
            for q in chain.pairings:
                total.add_piece(f"p{k}", chain.pieces[q.src].region, f"p{k}", 1)
                total.add_piece(f"q{k}", chain.pieces[q.dst].region, f"q{k}", -1)
                total.pair(f"p{k}", f"q{k}", q.isometry)
                k += 1
    total.claim("source", poly, [f"p{i}" for i in range(k)])
    total.claim("target", rect_region((0, 0), width, y, F), [f"q{i}" for i in range(k)])
    total.params.update({"area": y * width, "width": width, "height": y})
    return total


# ---------------------------------------------------------------------------
# classes of boxes

def parallelotope_normal_form(p: Parallelotope) -> tuple:
    """(volume, representative box [0,1]^{n-1} x [0, volume]) of a full-rank parallelotope."""
    if p.rank != p.dim:
        raise DomainError("normal form needs a full-rank parallelotope; flat ones have V_n = 0")
    if p.dim > 4:
        raise DomainError("normal form is supported up to dimension 4")
    F = p.field
    vol = p.volume()
    n = p.dim
    rep = Parallelotope.box([F.zero] * n, [F.one] * (n - 1) + [vol], p.closed, F)
    return vol, rep


@dataclass
class KZVector:
    """(chi, V_1, ..., V_n) of a signed list of boxes."""

    chi: int
    v: tuple  # of Surd

    def __eq__(self, other) -> bool:
        return (isinstance(other, KZVector) and self.chi == other.chi and len(self.v) == len(other.v)
                and all(x == y for x, y in zip(self.v, other.v)))

    def floats(self) -> tuple:
        return (self.chi,) + tuple(float(x) for x in self.v)

    def to_json(self) -> dict:
        return {"chi": self.chi, "V": [float(x) for x in self.v], "V_exact": [repr(x) for x in self.v]}


def _box_vector(p: Parallelotope, n: int, F: FieldSpec) -> tuple:
    """(chi, [V_1..V_n]) of one rectangular box."""
    if not p.is_rectangular():
        raise DomainError("kz_vector needs rectangular boxes; use parallelotope_normal_form first")
    norms = [dot(e, e) for e in p.edges]
    r = len(norms)
    V = [Surd.zero(F) for _ in range(n)]
    if p.closed:
        for i in range(1, r + 1):
            acc = Surd.zero(F)
            for S in combinations(range(r), i):
                prod = F.one
                for j in S:
                    prod = prod * norms[j]
                acc = acc + Surd.sqrt(prod)
            V[i - 1] = acc
        return 1, V
    # half-open: only the top intrinsic volume survives
    if r:
        prod = F.one
        for x in norms:
            prod = prod * x
        V[r - 1] = Surd.sqrt(prod)
        return 0, V
    return 1, V  # a point is closed and half-open at once


def kz_vector(items: Sequence, dim: Optional[int] = None) -> KZVector:
    """Signed sum of the invariants of boxes.

    ``items`` are Parallelotopes or (coefficient, Parallelotope) with an
    integer coefficient.
    """
    pairs = [it if isinstance(it, tuple) else (1, it) for it in items]
    if dim is None:
        if not pairs:
            raise DomainError("kz_vector of an empty list needs dim")
        dim = pairs[0][1].dim
    F = pairs[0][1].field if pairs else make_field(1)
    chi = 0
    V = [Surd.zero(F) for _ in range(dim)]
    for s, p in pairs:
        if p.dim != dim:
            raise DomainError("all boxes must live in the same space")
        c, v = _box_vector(p, dim, F)
        chi += s * c
        V = [a + b.scale(F(s)) for a, b in zip(V, v)]
    return KZVector(chi, tuple(V))


def kz_equal(x: Sequence, y: Sequence, dim: Optional[int] = None) -> bool:
    """Equality of two signed box lists in the group of box classes."""
    if dim is None:
        its = list(x) + list(y)
        dim = (its[0] if not isinstance(its[0], tuple) else its[0][1]).dim if its else 0
    return kz_vector(x, dim) == kz_vector(y, dim)


def reduces_to_flat(items: Sequence) -> bool:
    """True when the full-rank part cancels under normal-form bookkeeping."""
    pairs = [it if isinstance(it, tuple) else (1, it) for it in items]
    if not pairs:
        return True
    F = pairs[0][1].field
    tot = F.zero
    for s, p in pairs:
        if p.rank == p.dim:
            vol, _ = parallelotope_normal_form(p)
            tot = tot + vol * s
    return not tot
