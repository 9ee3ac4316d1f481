"""Alternating chamber sums of a body under a valuation.

``pizza_sum`` evaluates sum_T (-1)^T mu(T cap (K + a)) over the open
chambers T of a Coxeter arrangement, exactly (polytopes, volume or chi_c)
or by Monte Carlo (balls, annuli, polytopes).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .coxeter import CoxeterGroup, chambers_with_signs, enumerate_group
from .errors import DomainError, PizzaError
from .linalg import dot
from .regions import Constraint, HalfOpenRegion, euler_cs, exact_volume, hull_region
from .roots import Arrangement, PositiveSystem, PseudoRootSystem
from .twostruct import TwoStructure


class HypothesisError(PizzaError):
    """A hypothesis of the vanishing theorem fails for this input."""


class UnsupportedError(PizzaError):
    """Method and body kind do not combine."""


class InapplicableError(PizzaError):
    """The operation does not apply to this type."""


# ---------------------------------------------------------------------------
# bodies

@dataclass
class Body:
    """A body centered at the origin, to be translated by a.

    kind is one of ``ball``, ``annulus``, ``polytope`` and ``shell`` (outer
    polytope minus the interior-closed inner polytope).
    """

    kind: str
    radius: Optional[object] = None
    inner_radius: Optional[object] = None
    region: Optional[HalfOpenRegion] = None
    inner: Optional[HalfOpenRegion] = None
    label: str = ""

    @classmethod
    def ball(cls, r) -> "Body":
        return cls("ball", radius=r, label=f"ball(r={r})")

    @classmethod
    def annulus(cls, r1, r2) -> "Body":
        if not r1 < r2:
            raise DomainError("annulus needs r1 < r2")
        return cls("annulus", radius=r2, inner_radius=r1, label=f"annulus({r1},{r2})")

    @classmethod
    def polytope(cls, region: HalfOpenRegion, label: str = "polytope") -> "Body":
        return cls("polytope", region=region, label=label)

    @classmethod
    def box(cls, c, dim: int, field) -> "Body":
        c = field(c)
        return cls("polytope", region=HalfOpenRegion.box([-c] * dim, [c] * dim, field), label=f"box(c={c})")

    @classmethod
    def orbit_polytope(cls, p: Sequence, W: CoxeterGroup) -> "Body":
        S = W.system
        p = S.vector(p)
        pts = list(dict.fromkeys(w(p) for w in W.elements))
        return cls("polytope", region=hull_region(pts, S.field), label="orbit_polytope")

    @classmethod
    def shell(cls, outer: HalfOpenRegion, inner: HalfOpenRegion) -> "Body":
        return cls("shell", region=outer, inner=inner, label="shell")

    def is_polytope(self) -> bool:
        return self.kind in ("polytope", "shell")

    @property
    def dim(self) -> int:
        return self.region.dim

    def float_volume(self, dim: int) -> float:
        if self.kind == "ball":
            return _ball_vol(dim) * float(self.radius) ** dim
        if self.kind == "annulus":
            return _ball_vol(dim) * (float(self.radius) ** dim - float(self.inner_radius) ** dim)
        v = float(exact_volume(self.region))
        if self.kind == "shell":
            v -= float(exact_volume(self.inner))
        return v


def _ball_vol(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def is_w_stable(region: HalfOpenRegion, W: CoxeterGroup) -> bool:
    """w(K) = K for all w, checked on the reflection generators (exact)."""
    base = region.canonical_constraints()
    zero = (region.field.zero,) * region.dim
    for s in W.reflections:
        img = region.transform(s.matrix, zero).canonical_constraints()
        if img != base:
            return False
    return True


def check_hypotheses(A: Arrangement, K: Body, a: Sequence, W: CoxeterGroup) -> None:
    """-id in W and hull{w(a)} inside K (exact)."""
    if not W.has_minus_id():
        raise HypothesisError(f"-id is not in W({A.system.type_label})")
    if K.kind in ("ball", "annulus"):
        r = A.system.field(K.radius)
        n2 = dot(a, a)
        if n2 > r * r:
            raise HypothesisError(f"|w(a)| = |a| exceeds the radius {K.radius}")
        return
    outer = K.region
    for w in W.elements:
        wa = w(a)
        if not outer.contains(wa):
            raise HypothesisError(f"w(a) = {tuple(float(x) for x in wa)} lies outside K")


# ---------------------------------------------------------------------------
# signed region lists

@dataclass
class SignedRegionList:
    terms: list = dc_field(default_factory=list)  # (sign, region, label)

    def append(self, sign: int, region: HalfOpenRegion, label: str = ""):
        self.terms.append((sign, region, label))

    def evaluate(self, valuation: str = "volume"):
        total = None
        for s, R, _ in self.terms:
            v = _valuate(R, valuation)
            term = v if s > 0 else -v
            total = term if total is None else total + term
        return 0 if total is None else total

    def __len__(self):
        return len(self.terms)


def _valuate(R: HalfOpenRegion, valuation: str):
    if valuation == "volume":
        return exact_volume(R)
    if valuation == "chi":
        return euler_cs(R)
    raise DomainError(f"unknown valuation {valuation!r}")


def pizza_terms(A: Arrangement, K: Body, a: Sequence, W: Optional[CoxeterGroup] = None) -> SignedRegionList:
    """Open chambers T intersected with K + a, with signs."""
    if W is None:
        W = enumerate_group(A.positive)
    out = SignedRegionList()
    if K.kind == "shell":
        outer = K.region.translate(a)
        inner = K.inner.translate(a)
        for k, ch in enumerate(chambers_with_signs(A, W)):
            for j, piece in enumerate(ch.h_rep.intersect(outer).difference(inner)):
                out.append(ch.sign, piece, f"T{k}.{j}")
        return out
    Ka = K.region.translate(a)
    for k, ch in enumerate(chambers_with_signs(A, W)):
        out.append(ch.sign, ch.h_rep.intersect(Ka), f"T{k}")
    return out


@dataclass
class PizzaResult:
    value: object
    stderr: Optional[float] = None
    method: str = "exact"
    n_terms: int = 0
    samples: int = 0

    def is_zero(self, k: float = 4.0) -> bool:
        if self.stderr is None:
            return not self.value
        return abs(self.value) <= k * self.stderr


def pizza_sum(A: Arrangement, K: Body, a: Sequence, valuation: str = "volume", method: str = "exact",
              n_samples: int = 10**6, seed: int = 0, W: Optional[CoxeterGroup] = None,
              check: bool = True) -> PizzaResult:
    """sum over open chambers T of (-1)^T mu(T cap (K + a)).

    Parameters
    ----------
    method : {"exact", "mc"}
        ``exact`` needs a polytope body; ``mc`` supports volume only.
    """
    S = A.system
    a = S.vector(a)
    if W is None:
        W = enumerate_group(A.positive)
    if check:
        check_hypotheses(A, K, a, W)
    if method == "exact":
        if not K.is_polytope():
            raise UnsupportedError(f"exact method needs a polytope body, got {K.kind}")
        terms = pizza_terms(A, K, a, W)
        return PizzaResult(terms.evaluate(valuation), None, "exact", len(terms))
    if method == "mc":
        if valuation != "volume":
            raise UnsupportedError("Monte Carlo supports the volume valuation only")
        est, se = mc_pizza(A, K, a, n_samples, seed)
        return PizzaResult(est, se, "mc", 0, n_samples)
    raise UnsupportedError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Monte Carlo

SHARD = 1_000_000
WALL_EPS = 1e-12


def sample_body(K: Body, dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n uniform points of K (centered at the origin)."""
    if K.kind in ("ball", "annulus"):
        g = rng.standard_normal((n, dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        R = float(K.radius)
        r0 = float(K.inner_radius) if K.kind == "annulus" else 0.0
        u = rng.random(n)
        # radial inversion: P(|x| <= s) proportional to s^d - r0^d
        rad = (r0 ** dim + u * (R ** dim - r0 ** dim)) ** (1.0 / dim)
        return g * rad[:, None]
    # rejection from the bounding box
    A_, b_ = K.region._float()
    V = np.array([[float(x) for x in v] for v in K.region.vertices(require_bounded=True)])
    lo, hi = V.min(axis=0), V.max(axis=0)
    out = []
    got = 0
    while got < n:
        m = max(2 * (n - got), 1024)
        x = lo + (hi - lo) * rng.random((m, dim))
        ok = (x @ A_.T - b_ >= 0).all(axis=1)
        if K.kind == "shell":
            Ai, bi = K.inner._float()
            ok &= ~(x @ Ai.T - bi >= 0).all(axis=1)
        x = x[ok][: n - got]
        out.append(x)
        got += len(x)
    return np.vstack(out)


def chamber_signs_float(normals: np.ndarray, x: np.ndarray) -> np.ndarray:
    """(-1)^{#negative inner products}; 0 within WALL_EPS of a wall."""
    ip = x @ normals.T
    neg = (ip < 0).sum(axis=1)
    s = np.where(neg % 2 == 0, 1.0, -1.0)
    s[(np.abs(ip) < WALL_EPS).any(axis=1)] = 0.0
    return s


def mc_pizza(A: Arrangement, K: Body, a: Sequence, n_samples: int, seed: int):
    """Monte Carlo estimate and standard error of the alternating volume sum."""
    dim = A.system.ambient_dim
    normals = np.array([[float(x) for x in r] for r in A.hyperplanes])
    af = np.array([float(x) for x in a])
    vol = K.float_volume(dim)
    shards = max(1, -(-n_samples // SHARD))
    seqs = np.random.SeedSequence(seed).spawn(shards)
    sums, sqs = [], []
    left = n_samples
    for ss in seqs:
        m = min(SHARD, left)
        left -= m
        rng = np.random.default_rng(ss)
        x = sample_body(K, dim, m, rng) + af
        s = chamber_signs_float(normals, x)
        sums.append(float(s.sum()))
        sqs.append(float((s * s).sum()))
    n = n_samples
    mean = math.fsum(sums) / n
    var = max(math.fsum(sqs) / n - mean * mean, 0.0)
    return vol * mean, vol * math.sqrt(var / n)


# ---------------------------------------------------------------------------
# A1^n closed form

def _is_a1n(S: PseudoRootSystem) -> bool:
    return all(b.label == "A1" for b in S.blocks) and len(S.roots) == 2 * S.ambient_dim


def a1n_closed_form(a: Sequence, P: PositiveSystem):
    """prod 2(a, e_i) and the box prod (0, 2(a, e_i) e_i] it is the signed class of.

    Returns ``(value, coefficient, region)``: value = coefficient * vol(region).
    The box side at 0 is open and the far side closed; when (a, e_i) < 0
    the interval is [2(a, e_i), 0) with coefficient -1.
    """
    S = P.system
    if not _is_a1n(S):
        raise InapplicableError(f"{S.type_label} is not of type A1^n")
    a = S.vector(a)
    F = S.field
    n = S.ambient_dim
    value = F.one
    coef = 1
    cons = []
    for e in P.positive_roots:
        c = 2 * dot(a, e)
        value = value * c
        s = c.sign()
        coef *= s if s else 1
        # segment from 0 (excluded) to c*e (included), along e
        if s >= 0:
            cons.append(Constraint(e, F.zero, True))
            cons.append(Constraint(tuple(-x for x in e), -c, False))
        else:
            cons.append(Constraint(tuple(-x for x in e), F.zero, True))
            cons.append(Constraint(e, c, False))
    region = HalfOpenRegion(n, cons, F)
    return value, coef, region


# ---------------------------------------------------------------------------
# expansion identity

def _sign_pattern(x: Sequence, roots: Sequence) -> int:
    neg = 0
    for r in roots:
        s = dot(x, r).sign()
        if s == 0:
            raise DomainError("point lies on a wall")
        neg += s < 0
    return -1 if neg % 2 else 1


def expansion_check_pointwise(A: Arrangement, structures: list, x: Sequence) -> tuple:
    """Compare both sides of the expansion identity evaluated at x.

    Returns ``(ok, lhs, rhs)`` with integer sides.
    """
    S = A.system
    x = S.vector(x)
    lhs = _sign_pattern(x, A.hyperplanes)
    rhs = sum(phi.epsilon * _sign_pattern(x, phi.positive_vectors(S)) for phi in structures)
    return lhs == rhs, lhs, rhs


def sub_arrangement(A: Arrangement, phi: TwoStructure) -> Arrangement:
    """H_phi with base chamber given by phi+ (same order vector)."""
    S = A.system
    sub = PseudoRootSystem(S.field, phi.root_vectors(S), phi.type_label)
    return Arrangement(PositiveSystem(sub, A.positive.order_vector))


def expansion_check_valuation(A: Arrangement, structures: list, K: HalfOpenRegion, valuation: str = "volume",
                              W: Optional[CoxeterGroup] = None) -> tuple:
    """Both sides of the expansion identity under e_K followed by a valuation.

    K need not be W-stable.  Returns ``(ok, lhs, rhs)``.
    """
    body = Body.polytope(K)
    zero = (A.system.field.zero,) * A.system.ambient_dim
    lhs = pizza_terms(A, body, zero, W).evaluate(valuation)
    rhs = 0
    for phi in structures:
        sub = sub_arrangement(A, phi)
        v = pizza_terms(sub, body, zero).evaluate(valuation)
        rhs = rhs + (v if phi.epsilon > 0 else -v)
    return lhs == rhs, lhs, rhs


# ---------------------------------------------------------------------------
# f polynomial

class Poly:
    """Sparse multivariate polynomial: exponent tuple -> coefficient."""

    def __init__(self, n: int, terms: Optional[dict] = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        return cls(n, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(coeffs)})

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * n: c})

    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return Poly(self.n, t)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.n, {k: v * other for k, v in self.terms.items()})
        t = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                t[k] = t[k] + v1 * v2 if k in t else v1 * v2
        return Poly(self.n, t)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self, d: int) -> bool:
        return all(sum(k) == d for k in self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and (self - other).is_zero()

    def __call__(self, x: Sequence):
        acc = 0
        for k, v in self.terms.items():
            m = v
            for xi, e in zip(x, k):
                if e:
                    m = m * xi ** e
            acc = acc + m
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"a{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(k) if e)
            parts.append(f"{v!r}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _product_form(n, roots, F):
    f = Poly.const(n, F.one)
    for e in roots:
        f = f * Poly.linear([2 * x for x in e])
    return f


def f_polynomial(A: Arrangement, structures: list) -> tuple:
    """f(a) = sum_phi eps(phi) prod_{e in phi+} 2(a, e); returns (f, is_zero)."""
    S = A.system
    for phi in structures:
        if any(t != "A1" for _, t in phi.components):
            raise InapplicableError("f is defined when every 2-structure is of type A1^n")
    n = S.ambient_dim
    f = Poly(n)
    for phi in structures:
        term = _product_form(n, phi.positive_vectors(S), S.field)
        f = f + (term if phi.epsilon > 0 else -term)
    return f, f.is_zero()


def compose_linear(f: Poly, M: Sequence[Sequence]) -> Poly:
    """(f o M)(a) = f(M a)."""
    n = f.n
    rows = [Poly.linear(list(r)) for r in M]
    out = Poly(n)
    for k, v in f.terms.items():
        m = Poly.const(n, v)
        for i, e in enumerate(k):
            for _ in range(e):
                m = m * rows[i]
        out = out + m
    return out


def check_antisymmetry(f: Poly, W: CoxeterGroup) -> bool:
    """f o w = det(w) f for every w (coefficientwise)."""
    for w in W.elements:
        g = compose_linear(f, w.matrix)
        if not (g == (f if w.det > 0 else -f)):
            return False
    return True
