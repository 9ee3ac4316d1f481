"""Convex polyhedra with individually strict or weak facet inequalities.

A ``HalfOpenRegion`` is the set of v with (v, normal) > offset (strict) or
(v, normal) >= offset (weak) for each constraint.  Emptiness is decided by
Fourier-Motzkin elimination with strictness flags; vertices, faces, volume
and the Euler characteristic with compact support are exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import mpmath
import numpy as np
from gmpy2 import mpq

from .errors import DomainError, ResourceError, SingularMatrixError
from .field import AlgebraicNumber, FieldSpec, float_interval, make_field
from .linalg import affine_rank, det, dot, nullspace, rank, solve, vsub

MAX_DIM = 4


class UnboundedError(DomainError):
    """A bounded region was required."""


def _sgn(x) -> int:
    if isinstance(x, AlgebraicNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def _abs(x):
    return -x if _sgn(x) < 0 else x


@dataclass(frozen=True)
class Constraint:
    """(v, normal) > offset if strict, else (v, normal) >= offset."""

    normal: tuple
    offset: object
    strict: bool = False

    def value(self, v: Sequence):
        return dot(self.normal, v) - self.offset

    def holds(self, v: Sequence) -> bool:
        s = _sgn(self.value(v))
        return s > 0 or (s == 0 and not self.strict)

    def complement(self) -> "Constraint":
        return Constraint(tuple(-x for x in self.normal), -self.offset, not self.strict)

    def weak(self) -> "Constraint":
        return Constraint(self.normal, self.offset, False) if self.strict else self

    def canonical(self) -> "Constraint":
        """Scale so the first nonzero normal entry has absolute value 1."""
        for x in self.normal:
            if x:
                s = _abs(x)
                if s == 1:
                    return self
                inv = 1 / s
                return Constraint(tuple(y * inv for y in self.normal), self.offset * inv, self.strict)
        return self

    def to_json(self) -> dict:
        return {"normal": [x.to_json() for x in self.normal], "offset": self.offset.to_json(),
                "strict": self.strict}


class HalfOpenRegion:
    """Intersection of flagged half-spaces in R^dim."""

    def __init__(self, dim: int, constraints: Iterable[Constraint] = (), field: Optional[FieldSpec] = None):
        self.dim = dim
        cons = []
        seen = set()
        for c in constraints:
            if len(c.normal) != dim:
                raise DomainError(f"constraint of dimension {len(c.normal)} in a region of dimension {dim}")
            key = (c.normal, c.offset, c.strict)
            if key not in seen:
                seen.add(key)
                cons.append(c)
        self.constraints = tuple(cons)
        if field is None:
            field = cons[0].normal[0].field if cons else make_field(1)
        self.field = field
        self._cache = {}

    def __repr__(self) -> str:
        return f"HalfOpenRegion(dim={self.dim}, {len(self.constraints)} constraints)"

    # -- construction ---------------------------------------------------
    @classmethod
    def box(cls, lows: Sequence, highs: Sequence, field: FieldSpec, low_strict=False, high_strict=False):
        n = len(lows)
        cons = []
        for i in range(n):
            e = tuple(field.one if j == i else field.zero for j in range(n))
            cons.append(Constraint(e, field(lows[i]), low_strict))
            cons.append(Constraint(tuple(-x for x in e), -field(highs[i]), high_strict))
        return cls(n, cons, field).mark_bounded()

    @classmethod
    def halfopen_box(cls, lows, highs, field):
        """prod (low_i, high_i]."""
        return cls.box(lows, highs, field, low_strict=True, high_strict=False)

    def intersect(self, other: "HalfOpenRegion") -> "HalfOpenRegion":
        if other.dim != self.dim:
            raise DomainError("dimension mismatch")
        out = HalfOpenRegion(self.dim, self.constraints + other.constraints, self.field)
        if self._cache.get("bounded") or other._cache.get("bounded"):
            out._cache["bounded"] = True
        return out

    def _inherit(self, out: "HalfOpenRegion") -> "HalfOpenRegion":
        if self._cache.get("bounded"):
            out._cache["bounded"] = True
        return out

    __and__ = intersect

    def add(self, *cons: Constraint) -> "HalfOpenRegion":
        return self._inherit(HalfOpenRegion(self.dim, self.constraints + tuple(cons), self.field))

    def closure(self) -> "HalfOpenRegion":
        return self._inherit(HalfOpenRegion(self.dim, [c.weak() for c in self.constraints], self.field))

    def mark_bounded(self) -> "HalfOpenRegion":
        """Record boundedness known from construction."""
        self._cache["bounded"] = True
        return self

    def translate(self, a: Sequence) -> "HalfOpenRegion":
        """The region + a."""
        return self._inherit(HalfOpenRegion(self.dim, [Constraint(c.normal, c.offset + dot(c.normal, a), c.strict)
                                                       for c in self.constraints], self.field))

    def transform(self, M: Sequence[Sequence], t: Sequence) -> "HalfOpenRegion":
        """Image under x -> M x + t for orthogonal M."""
        out = []
        for c in self.constraints:
            Mn = tuple(dot(row, c.normal) for row in M)
            out.append(Constraint(Mn, c.offset + dot(Mn, t), c.strict))
        return self._inherit(HalfOpenRegion(self.dim, out, self.field))

    def contains(self, v: Sequence) -> bool:
        return all(c.holds(v) for c in self.constraints)

    def canonical_constraints(self) -> frozenset:
        return frozenset(c.canonical() for c in self.constraints)

    def to_json(self) -> dict:
        return {"dim": self.dim, "N": self.field.N, "constraints": [c.to_json() for c in self.constraints]}

    @classmethod
    def from_json(cls, data: dict) -> "HalfOpenRegion":
        from .field import from_json

        F = make_field(int(data["N"]))
        cons = [Constraint(tuple(F(from_json(x)) for x in c["normal"]), F(from_json(c["offset"])), bool(c["strict"]))
                for c in data["constraints"]]
        return cls(int(data["dim"]), cons, F)

    # -- float view ---------------------------------------------------------
    def _float(self):
        if "float" not in self._cache:
            A = np.array([[float(x) for x in c.normal] for c in self.constraints], dtype=float).reshape(-1, self.dim)
            b = np.array([float(c.offset) for c in self.constraints], dtype=float)
            self._cache["float"] = (A, b)
        return self._cache["float"]

    # -- predicates -------------------------------------------------------
    def is_empty(self) -> bool:
        if "empty" not in self._cache:
            self._cache["empty"] = _is_empty(self)
        return self._cache["empty"]

    def is_bounded(self) -> bool:
        if "bounded" not in self._cache:
            self._cache["bounded"] = _is_bounded(self)
        return self._cache["bounded"]

    def subset_of(self, other: "HalfOpenRegion") -> bool:
        """Exact containment self <= other."""
        return all(self.add(c.complement()).is_empty() for c in other.constraints)

    def equals(self, other: "HalfOpenRegion") -> bool:
        return self.subset_of(other) and other.subset_of(self)

    def difference(self, other: "HalfOpenRegion") -> list:
        """self - other as disjoint convex pieces (possibly empty ones dropped)."""
        if self.intersect(other).is_empty():
            return [self]
        out = []
        acc = self
        for c in other.constraints:
            piece = acc.add(c.complement())
            if piece.is_empty():
                continue  # acc already satisfies c
            out.append(piece.simplify())
            acc = acc.add(c)
            if acc.is_empty():
                break
        return out

    def simplify(self) -> "HalfOpenRegion":
        """Drop constraints implied by the others (exact)."""
        if self._cache.get("simple") or len(self.constraints) <= 2:
            return self
        keep = list(self.constraints)
        i = 0
        while i < len(keep):
            rest = keep[:i] + keep[i + 1:]
            test = HalfOpenRegion(self.dim, rest + [keep[i].complement()], self.field)
            if rest and test.is_empty():
                keep = rest
            else:
                i += 1
        out = self._inherit(HalfOpenRegion(self.dim, keep, self.field))
        out._cache["simple"] = True
        if "empty" in self._cache:
            out._cache["empty"] = self._cache["empty"]
        return out

    # -- geometry ---------------------------------------------------------
    def vertices(self, require_bounded: bool = False) -> list:
        if require_bounded and not self.is_bounded():
            raise UnboundedError("region is unbounded")
        if "verts" not in self._cache:
            self._cache["verts"] = _vertices(self)
        return self._cache["verts"]

    def faces(self) -> "FaceLattice":
        if "faces" not in self._cache:
            if not self.is_bounded():
                raise UnboundedError("face lattice needs a bounded region")
            self._cache["faces"] = FaceLattice(self)
        return self._cache["faces"]

    def volume(self):
        return exact_volume(self)

    def euler_cs(self) -> int:
        return euler_cs(self)


# ---------------------------------------------------------------------------
# emptiness

def _quot_iv(b, a) -> Optional[tuple]:
    """Float enclosure of b/a, or None when a may vanish."""
    blo, bhi = float_interval(b)
    alo, ahi = float_interval(a)
    if alo <= 0.0 <= ahi:
        return None
    q = (blo / alo, blo / ahi, bhi / alo, bhi / ahi)
    lo, hi = min(q), max(q)
    return lo - abs(lo) * 1e-15 - 1e-300, hi + abs(hi) * 1e-15 + 1e-300


def _cmp_quot(r1, r2) -> int:
    """Sign of b1/a1 - b2/a2 for rows (a, b, s, iv) with a1*a2 > 0."""
    i1, i2 = r1[3], r2[3]
    if i1 is not None and i2 is not None:
        if i1[0] > i2[1]:
            return 1
        if i1[1] < i2[0]:
            return -1
    d = _sgn(r1[1] * r2[0] - r2[1] * r1[0])
    return d if _sgn(r1[0]) * _sgn(r2[0]) > 0 else -d


def _interval_empty(rows: list) -> bool:
    """1-D feasibility of a*x >= b (or >) without divisions."""
    lo = hi = None  # binding rows (a, b, strict, enclosure of b/a)
    for a, b, s in rows:
        sa = _sgn(a)
        if sa == 0:
            sb = _sgn(b)
            if sb > 0 or (sb == 0 and s):
                return True
            continue
        row = (a, b, s, _quot_iv(b, a))
        if sa > 0:
            # x >= b/a; keep the largest bound, strict on ties
            if lo is None:
                lo = row
            else:
                d = _cmp_quot(row, lo)
                if d > 0 or (d == 0 and s):
                    lo = row
        else:
            # x <= b/a; keep the smallest bound
            if hi is None:
                hi = row
            else:
                d = _cmp_quot(row, hi)
                if d < 0 or (d == 0 and s):
                    hi = row
    if lo is None or hi is None:
        return False
    # compare b/a of opposite-signed rows: flip the upper row to a > 0
    up = (-hi[0], -hi[1], hi[2], hi[3])
    d = _cmp_quot(lo, up)
    return d > 0 or (d == 0 and (lo[2] or hi[2]))


def _fm_empty(rows: list, n: int) -> bool:
    """Fourier-Motzkin: rows are (coeffs, b, strict) meaning coeffs.x >= b (or >)."""
    if n == 1:
        return _interval_empty([(a[0], b, s) for a, b, s in rows])
    for k in range(n - 1, 0, -1):
        pos, neg, rest = [], [], []
        for a, b, s in rows:
            sg = _sgn(a[k])
            if sg == 0:
                rest.append((a, b, s))
                continue
            inv = 1 / _abs(a[k])
            row = (tuple(x * inv for x in a[:k]), b * inv, s)
            (pos if sg > 0 else neg).append(row)
        last = k == 1
        new = {}
        flat = []

        def push(a, b, s):
            if last:
                flat.append((a[0], b, s))
                return
            lead = None
            for x in a:
                if x:
                    lead = _abs(x)
                    break
            if lead is None:
                sb = _sgn(b)
                if sb > 0 or (sb == 0 and s):
                    raise _Infeasible
                return
            if lead != 1:
                inv = 1 / lead
                a = tuple(x * inv for x in a)
                b = b * inv
            key = tuple(a)
            old = new.get(key)
            if old is None:
                new[key] = (b, s)
            else:
                d = _sgn(b - old[0])
                if d > 0 or (d == 0 and s and not old[1]):
                    new[key] = (b, s)

        try:
            for a, b, s in rest:
                push(tuple(a[:k]), b, s)
            for ap, bp, sp in pos:
                for aq, bq, sq in neg:
                    push(tuple(x + y for x, y in zip(ap, aq)), bp + bq, sp or sq)
        except _Infeasible:
            return True
        if last:
            return _interval_empty(flat)
        rows = [(a, b, s) for a, (b, s) in new.items()]
        if not rows:
            return False
    return False


class _Infeasible(Exception):
    pass


def _float_witness(R: HalfOpenRegion):
    """Try to find an exactly verifiable interior-ish point by LP in floats."""
    from scipy.optimize import linprog

    A, b = R._float()
    m, n = A.shape
    # maximize s subject to A x - s*1 >= b (all constraints, margin), s <= 1
    Aub = np.hstack([-A, np.ones((m, 1))])
    res = linprog(c=np.r_[np.zeros(n), -1.0], A_ub=Aub, b_ub=-b,
                  bounds=[(None, None)] * n + [(None, 1.0)], method="highs")
    if res.status != 0 or res.x[-1] <= 1e-9:
        return None
    x = res.x[:n]
    F = R.field
    for digits in (6, 12, None):
        cand = tuple(F(mpq(round(v, digits)) if digits else mpq(float(v))) for v in x)
        if R.contains(cand):
            return cand
    return None


def _planar_witness(R: HalfOpenRegion):
    """Exactly verified interior point of a planar region, found in floats."""
    A, b = R._float()
    k = len(b)
    if k < 2:
        return None
    i, j = np.triu_indices(k, 1)
    det = A[i, 0] * A[j, 1] - A[i, 1] * A[j, 0]
    ok = np.abs(det) > 1e-12
    if not ok.any():
        return None
    i, j, det = i[ok], j[ok], det[ok]
    x = (b[i] * A[j, 1] - A[i, 1] * b[j]) / det
    y = (A[i, 0] * b[j] - b[i] * A[j, 0]) / det
    P = np.stack([x, y], axis=1)
    feas = (P @ A.T - b >= -1e-9 * (1 + np.abs(b))).all(axis=1)
    if not feas.any():
        return None
    V = P[feas]
    c = V.mean(axis=0)
    # nudge off the tight constraints (cones have a single vertex)
    nrm = A / np.linalg.norm(A, axis=1, keepdims=True)
    tight = np.abs(A @ c - b) < 1e-9 * (1 + np.abs(b))
    g = nrm[tight].sum(axis=0) if tight.any() else np.zeros(2)
    F = R.field
    tol = 1e-10 * (1 + np.abs(b))
    for t in (0.0, 1e-3, 1e-1, 1.0):
        q = c + t * g
        for digits in (4, 8, 14):
            r = np.round(q, digits)
            if not (A @ r - b > tol).all():
                continue
            cand = (F(mpq(repr(float(r[0])))), F(mpq(repr(float(r[1])))))
            if R.contains(cand):
                return cand
    return None


_EMPTY_CACHE: dict = {}


def _is_empty(R: HalfOpenRegion) -> bool:
    if not R.constraints:
        return False
    key = frozenset((c.normal, c.offset, c.strict) for c in R.constraints)
    hit = _EMPTY_CACHE.get(key)
    if hit is not None:
        return hit
    if R.dim == 2 and _planar_witness(R) is not None:
        out = False
    elif R.dim >= 3 and len(R.constraints) > 6 and _float_witness(R) is not None:
        out = False
    else:
        rows = [(c.normal, c.offset, c.strict) for c in R.constraints]
        out = _fm_empty(rows, R.dim)
    if len(_EMPTY_CACHE) > 200_000:
        _EMPTY_CACHE.clear()
    _EMPTY_CACHE[key] = out
    return out


def _is_bounded(R: HalfOpenRegion) -> bool:
    """Closure bounded iff empty or the recession cone is {0}."""
    if R.closure().is_empty():
        return True
    n, F = R.dim, R.field
    cone = [Constraint(c.normal, F.zero, False) for c in R.constraints]
    for i in range(n):
        for s in (1, -1):
            e = tuple(F(s) if j == i else F.zero for j in range(n))
            if not HalfOpenRegion(n, cone + [Constraint(e, F.one, False)], F).is_empty():
                return False
    return True


# ---------------------------------------------------------------------------
# vertices

def _vertices(R: HalfOpenRegion) -> list:
    n = R.dim
    if n > MAX_DIM:
        raise ResourceError(f"vertex enumeration limited to dimension {MAX_DIM}")
    cons = [c.weak() for c in R.constraints]
    m = len(cons)
    if m < n:
        return []
    A, b = R._float()
    subsets = np.array(list(itertools.combinations(range(m), n)), dtype=int)
    if len(subsets) > 2_000_000:
        raise ResourceError("too many constraint subsets for vertex enumeration")
    As = A[subsets]  # (k, n, n)
    bs = b[subsets]
    dets = np.linalg.det(As)
    scale = np.abs(As).reshape(len(As), -1).max(axis=1) ** n + 1e-300
    ok = np.abs(dets) > 1e-11 * scale
    found = {}
    if ok.any():
        sol = np.linalg.solve(As[ok], bs[ok][..., None])[..., 0]
        resid = sol @ A.T - b
        tol = 1e-7 * (1.0 + np.abs(sol).sum(axis=1, keepdims=True) * np.abs(A).max() + np.abs(b).max())
        feas = (resid >= -tol).all(axis=1)
        idx = np.nonzero(ok)[0][feas]
        sol = sol[feas]
        keys = {}
        for k, x in zip(idx, sol):
            key = tuple(np.round(x, 6))
            keys.setdefault(key, []).append(k)
        for key, ks in keys.items():
            for k in ks:
                sub = subsets[k]
                try:
                    v = solve([list(cons[i].normal) for i in sub], [cons[i].offset for i in sub])
                except SingularMatrixError:
                    continue
                if v in found:
                    break
                if all(c.holds(v) for c in cons):
                    found[v] = True
                break
    # float-singular subsets that are not clearly rank deficient: settle exactly
    bad = np.nonzero(~ok)[0]
    if len(bad):
        sv = np.linalg.svd(As[bad], compute_uv=False)
        unclear = sv[:, -1] > 1e-13 * (sv[:, 0] + 1e-300)
        for k in bad[unclear]:
            sub = subsets[k]
            try:
                v = solve([list(cons[i].normal) for i in sub], [cons[i].offset for i in sub])
            except SingularMatrixError:
                continue
            if v not in found and all(c.holds(v) for c in cons):
                found[v] = True
    return list(found)


# ---------------------------------------------------------------------------
# face lattice

class FaceLattice:
    """All nonempty faces of the closure of a bounded region.

    ``faces`` maps a frozenset of vertex indices to (dim, tight constraint
    indices on the whole face).
    """

    def __init__(self, R: HalfOpenRegion):
        self.region = R
        V = R.vertices()
        self.verts = V
        self.faces: dict = {}
        if not V:
            return
        cons = R.constraints
        tight = []
        for c in cons:
            tight.append(frozenset(i for i, v in enumerate(V) if not c.value(v)))
        self.tight = tight
        full = frozenset(range(len(V)))
        level = {full}
        seeds = {t for t in tight if t}
        allf = set(level) | seeds
        frontier = set(seeds)
        while frontier:
            new = set()
            for f in frontier:
                for g in seeds:
                    h = f & g
                    if h and h not in allf:
                        new.add(h)
            allf |= new
            frontier = new
        for f in allf:
            d = affine_rank([V[i] for i in sorted(f)])
            on = tuple(k for k, t in enumerate(tight) if f <= t)
            self.faces[f] = (d, on)

    @property
    def dim(self) -> int:
        if not self.faces:
            return -1
        return max(d for d, _ in self.faces.values())

    def in_region(self, f) -> bool:
        """relint(f) lies in the region iff no strict constraint is tight on all of f."""
        cons = self.region.constraints
        return not any(cons[k].strict for k in self.faces[f][1])

    def subfaces(self, f, d: int) -> list:
        return [g for g, (dg, _) in self.faces.items() if dg == d and g < f]

    def triangulate(self, f, memo=None) -> list:
        """Pulling triangulation of face f: list of vertex index tuples."""
        if memo is None:
            memo = {}
        if f in memo:
            return memo[f]
        d = self.faces[f][0]
        if d == 0:
            out = [(min(f),)]
        else:
            v0 = min(f)
            out = []
            for g in self.subfaces(f, d - 1):
                if v0 in g:
                    continue
                for s in self.triangulate(g, memo):
                    out.append(s + (v0,))
        memo[f] = out
        return out

    def top(self):
        return max(self.faces, key=lambda f: (self.faces[f][0], len(f)))


# ---------------------------------------------------------------------------
# valuations

def exact_volume(R: HalfOpenRegion):
    """n-volume of the closure of a bounded region."""
    F = R.field
    if not R.is_bounded():
        raise UnboundedError("volume of an unbounded region")
    V = R.vertices()
    n = R.dim
    if len(V) <= n:
        return F.zero
    if n == 1:
        return _abs(max(V, key=lambda v: v[0])[0] - min(V, key=lambda v: v[0])[0])
    if n == 2:
        if affine_rank(V) < 2:
            return F.zero
        return _abs(shoelace(order_polygon(V)))
    L = R.faces()
    f = L.top()
    if L.faces[f][0] < n:
        return F.zero
    total = F.zero
    for s in L.triangulate(f):
        p0 = V[s[-1]]
        total = total + _abs(det([list(vsub(V[i], p0)) for i in s[:-1]]))
    return total / math.factorial(n)


def order_polygon(V: Sequence) -> list:
    """Counter-clockwise order of the vertices of a convex polygon."""
    pts = np.array([[float(x) for x in v] for v in V])
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    return [V[i] for i in np.argsort(ang, kind="stable")]


def shoelace(P: Sequence):
    acc = P[0][0] - P[0][0]
    k = len(P)
    for i in range(k):
        x0, y0 = P[i]
        x1, y1 = P[(i + 1) % k]
        acc = acc + x0 * y1 - x1 * y0
    return acc / 2


def euler_cs(R: HalfOpenRegion) -> int:
    """Euler characteristic with compact support of a bounded region."""
    if not R.is_bounded():
        raise UnboundedError("euler_cs of an unbounded region")
    if R.is_empty():
        return 0
    L = R.faces()
    return sum((-1) ** d for f, (d, _) in L.faces.items() if L.in_region(f))


# ---------------------------------------------------------------------------
# formal sums of square roots

def _squarefree(n: int) -> tuple:
    """n = s^2 * f with f squarefree; return (s, f)."""
    s, f = 1, 1
    m = n
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            s *= p
        if m % p == 0:
            m //= p
            f *= p
        p += 1
    return s, f * m


class Surd:
    """A finite sum of c * sqrt(r) with c, r in the field (r >= 0).

    Rational radicands are normalized to squarefree integers, so equal
    lengths and rationally related lengths cancel symbolically.
    """

    __slots__ = ("terms", "field")

    def __init__(self, terms: dict, field: FieldSpec):
        self.field = field
        self.terms = {k: v for k, v in terms.items() if v}

    @classmethod
    def zero(cls, field):
        return cls({}, field)

    @classmethod
    def from_field(cls, x) -> "Surd":
        F = x.field
        return cls({1: x}, F)

    @classmethod
    def sqrt(cls, r) -> "Surd":
        """sqrt of a nonnegative field element."""
        F = r.field
        if _sgn(r) < 0:
            raise DomainError("square root of a negative number")
        if not r:
            return cls({}, F)
        if r.is_rational():
            q = r.as_rational()
            p, d = int(q.numerator), int(q.denominator)
            s, f = _squarefree(p * d)
            return cls({f: F(mpq(s, d))}, F)
        # clear denominators, pull out square content
        coeffs = r.coeffs
        den = 1
        for c in coeffs:
            den = den * int(c.denominator) // math.gcd(den, int(c.denominator))
        ints = [int(c * den) for c in coeffs]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        s, _ = _squarefree(g)
        core = r * (den * den) / (s * s)
        # sqrt(r) = s/den * sqrt(core)
        return cls({core: F(mpq(s, den))}, F)

    def __add__(self, other):
        if not isinstance(other, Surd):
            other = Surd.from_field(self.field(other))
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return Surd(t, self.field)

    __radd__ = __add__

    def __neg__(self):
        return Surd({k: -v for k, v in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Surd) else -self.field(other))

    def scale(self, c) -> "Surd":
        return Surd({k: c * v for k, v in self.terms.items()}, self.field)

    __mul__ = scale
    __rmul__ = scale

    def to_mpf(self, dps: int = 100):
        with mpmath.workdps(dps + 10):
            acc = mpmath.mpf(0)
            for k, v in self.terms.items():
                r = mpmath.mpf(k) if isinstance(k, int) else k.to_mpf(dps + 10)
                acc += v.to_mpf(dps + 10) * mpmath.sqrt(r)
            return acc

    def __float__(self):
        return float(self.to_mpf(30))

    def is_zero(self) -> bool:
        """Symbolic zero, else a 100-digit evaluation decides."""
        if not self.terms:
            return True
        v = self.to_mpf(100)
        return abs(v) < mpmath.mpf(10) ** -80

    def symbolic_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Surd):
            return (self - other).is_zero()
        return NotImplemented

    def __repr__(self):
        parts = []
        for k, v in self.terms.items():
            parts.append(f"{v!r}*sqrt({k!r})")
        return " + ".join(parts) if parts else "0"


@dataclass
class ValuationVector:
    """(V0, V1, ..., Vn); V0 is the compactly supported Euler characteristic."""

    chi: int
    intrinsic: tuple

    def __add__(self, other: "ValuationVector") -> "ValuationVector":
        k = max(len(self.intrinsic), len(other.intrinsic))
        a = _pad(self.intrinsic, k)
        b = _pad(other.intrinsic, k)
        return ValuationVector(self.chi + other.chi, tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return ValuationVector(-self.chi, tuple(-x for x in self.intrinsic))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: int) -> "ValuationVector":
        return ValuationVector(s * self.chi, tuple(s * x for x in self.intrinsic))

    def is_zero(self) -> bool:
        return self.chi == 0 and all(_is_zero_val(x) for x in self.intrinsic)

    def as_tuple(self):
        return (self.chi,) + tuple(self.intrinsic)


def _pad(t, k):
    return tuple(t) + (0,) * (k - len(t))


def _is_zero_val(x) -> bool:
    if isinstance(x, Surd):
        return x.is_zero()
    if isinstance(x, (int, float)):
        return x == 0
    return not x


def edge_length(p, q) -> Surd:
    d = vsub(p, q)
    return Surd.sqrt(dot(d, d))


def intrinsic_vector_2d(R: HalfOpenRegion) -> ValuationVector:
    """(chi_c, V1, V2) of a bounded half-open convex polygon.

    Summed over the relatively open faces lying in R: a point gives
    (1, 0, 0), an open segment (-1, length, 0) and an open 2-cell
    (1, -perimeter/2, area).
    """
    if R.dim != 2:
        raise DomainError("intrinsic_vector_2d needs a planar region")
    if not R.is_bounded():
        raise UnboundedError("unbounded region")
    F = R.field
    if R.closure().is_empty():
        return ValuationVector(0, (Surd.zero(F), F.zero))
    L = R.faces()
    V = L.verts
    chi = 0
    v1 = Surd.zero(F)
    v2 = F.zero
    for f, (d, _) in L.faces.items():
        if not L.in_region(f):
            continue
        chi += (-1) ** d
        if d == 1:
            a, b = _segment_ends([V[k] for k in f])
            v1 = v1 + edge_length(a, b)
        elif d == 2:
            poly = order_polygon([V[k] for k in f])
            per = Surd.zero(F)
            for k in range(len(poly)):
                per = per + edge_length(poly[k], poly[(k + 1) % len(poly)])
            v1 = v1 - per.scale(F(mpq(1, 2)))
            v2 = v2 + _abs(shoelace(poly))
    return ValuationVector(chi, (v1, v2))


def _segment_ends(P):
    pts = sorted(P, key=lambda v: (float(v[0]), float(v[1])))
    return pts[0], pts[-1]


def polygon_intrinsic_closed(V: Sequence) -> ValuationVector:
    """(1, perimeter/2, area) of the convex hull of V (a polygon)."""
    poly = order_polygon(V)
    F = poly[0][0].field
    per = Surd.zero(F)
    for k in range(len(poly)):
        per = per + edge_length(poly[k], poly[(k + 1) % len(poly)])
    return ValuationVector(1, (per.scale(F(mpq(1, 2))), _abs(shoelace(poly))))


def elementary_symmetric(xs: Sequence) -> list:
    e = [1] + [0] * len(xs)
    for x in xs:
        for k in range(len(xs), 0, -1):
            e[k] = e[k] + e[k - 1] * x
    return e


def box_intrinsic_vector(edges: Sequence, halfopen: bool) -> ValuationVector:
    """Intrinsic volumes of a rectangular box with the given edge lengths.

    Closed: (1, e_1, ..., e_k) with e_i the elementary symmetric
    polynomials.  Half-open (product of (0, c_i]): (0, 0, ..., 0, prod c_i).
    """
    k = len(edges)
    if halfopen:
        if k == 0:
            return ValuationVector(1, ())
        prod = edges[0]
        for x in edges[1:]:
            prod = prod * x
        z = prod - prod
        return ValuationVector(0, (z,) * (k - 1) + (prod,))
    e = elementary_symmetric(list(edges))
    return ValuationVector(1, tuple(e[1:]))


# ---------------------------------------------------------------------------
# hulls

def hull_region(points: Sequence, field: Optional[FieldSpec] = None) -> HalfOpenRegion:
    """Closed H-representation of the convex hull of exact points (full dimensional)."""
    pts = list(dict.fromkeys(tuple(p) for p in points))
    n = len(pts[0])
    F = field or pts[0][0].field
    if affine_rank(pts) < n:
        raise DomainError("hull_region needs a full-dimensional point set")
    if n == 1:
        lo = min(pts, key=lambda p: p[0])[0]
        hi = max(pts, key=lambda p: p[0])[0]
        return HalfOpenRegion(1, [Constraint((F.one,), lo), Constraint((-F.one,), -hi)], F)
    cands = []
    try:
        from scipy.spatial import ConvexHull

        arr = np.array([[float(x) for x in p] for p in pts])
        hull = ConvexHull(arr)
        cands = [tuple(s) for s in hull.simplices]
    except Exception:
        cands = []
    cons = _facets_from_subsets(pts, cands, F)
    if not _hull_ok(pts, cons):
        cons = _facets_from_subsets(pts, itertools.combinations(range(len(pts)), n), F)
    return HalfOpenRegion(n, sorted(cons, key=_ckey), F).mark_bounded()


def _ckey(c):
    return tuple(float(x) for x in c.normal) + (float(c.offset),)


def _facets_from_subsets(pts, subsets, F) -> list:
    n = len(pts[0])
    out = {}
    for sub in subsets:
        base = pts[sub[0]]
        diffs = [list(vsub(pts[i], base)) for i in sub[1:]]
        if rank(diffs) < n - 1:
            continue
        ns = nullspace(diffs)
        if len(ns) != 1:
            continue
        nrm = ns[0]
        off = dot(nrm, base)
        vals = [_sgn(dot(nrm, p) - off) for p in pts]
        if all(s >= 0 for s in vals):
            c = Constraint(tuple(nrm), off)
        elif all(s <= 0 for s in vals):
            c = Constraint(tuple(-x for x in nrm), -off)
        else:
            continue
        c = c.canonical()
        out[(c.normal, c.offset)] = c
    return list(out.values())


def _hull_ok(pts, cons) -> bool:
    if not cons:
        return False
    n = len(pts[0])
    # every facet must carry n affinely independent points, and the region's vertices must be the points
    for c in cons:
        on = [p for p in pts if not c.value(p)]
        if affine_rank(on) != n - 1:
            return False
    R = HalfOpenRegion(n, cons)
    if not R.is_bounded():
        return False
    return True


def polytope_from_vertices(points: Sequence) -> HalfOpenRegion:
    return hull_region(points)


class RegionSet:
    """A finite union of convex half-open pieces.

    Pieces produced by ``difference`` are pairwise disjoint; valuations
    assume disjointness.
    """

    def __init__(self, pieces: Iterable[HalfOpenRegion] = (), dim: Optional[int] = None):
        self.pieces = [p for p in pieces]
        if dim is None:
            if not self.pieces:
                raise DomainError("dimension needed for an empty RegionSet")
            dim = self.pieces[0].dim
        self.dim = dim

    @classmethod
    def of(cls, R: "HalfOpenRegion | RegionSet") -> "RegionSet":
        return R if isinstance(R, RegionSet) else cls([R], R.dim)

    def __repr__(self) -> str:
        return f"RegionSet({len(self.pieces)} pieces, dim={self.dim})"

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def is_empty(self) -> bool:
        return all(p.is_empty() for p in self.pieces)

    def nonempty(self) -> "RegionSet":
        return RegionSet([p for p in self.pieces if not p.is_empty()], self.dim)

    def intersect(self, other) -> "RegionSet":
        other = RegionSet.of(other)
        out = []
        for p in self.pieces:
            for q in other.pieces:
                r = p.intersect(q)
                if not r.is_empty():
                    out.append(r)
        return RegionSet(out, self.dim)

    def difference(self, other) -> "RegionSet":
        other = RegionSet.of(other)
        cur = [p for p in self.pieces if not p.is_empty()]
        for q in other.pieces:
            nxt = []
            for p in cur:
                nxt.extend(p.difference(q))
            cur = nxt
        return RegionSet(cur, self.dim)

    def union(self, other) -> "RegionSet":
        """Disjoint union representation of self | other."""
        other = RegionSet.of(other)
        return RegionSet(self.pieces + other.difference(self).pieces, self.dim)

    def subset_of(self, other) -> bool:
        return self.difference(other).is_empty()

    def equals(self, other) -> bool:
        other = RegionSet.of(other)
        return self.subset_of(other) and other.subset_of(self)

    def translate(self, a) -> "RegionSet":
        return RegionSet([p.translate(a) for p in self.pieces], self.dim)

    def transform(self, M, t) -> "RegionSet":
        return RegionSet([p.transform(M, t) for p in self.pieces], self.dim)

    def closure_pieces(self) -> "RegionSet":
        return RegionSet([p.closure() for p in self.pieces], self.dim)

    def volume(self):
        F = self.pieces[0].field if self.pieces else make_field(1)
        acc = F.zero
        for p in self.pieces:
            if not p.is_empty():
                acc = acc + exact_volume(p)
        return acc

    def euler_cs(self) -> int:
        return sum(euler_cs(p) for p in self.pieces if not p.is_empty())

    def is_bounded(self) -> bool:
        return all(p.is_empty() or p.is_bounded() for p in self.pieces)

    def to_json(self) -> dict:
        return {"dim": self.dim, "pieces": [p.to_json() for p in self.pieces]}

    @classmethod
    def from_json(cls, data: dict) -> "RegionSet":
        return cls([HalfOpenRegion.from_json(p) for p in data["pieces"]], int(data["dim"]))
