"""Normalized pseudo-root systems, positive systems and Coxeter arrangements.

Every root is a unit vector with coordinates in a single field
Q(2cos(pi/N)); membership tests are exact dictionary lookups because the
field representation is canonical.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Optional, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import DomainError
from .field import AlgebraicNumber, FieldSpec, common_field, embed_cos, embed_sin, make_field
from .linalg import dot, rank as _rank

Vector = tuple


class UnsupportedTypeError(DomainError):
    """Type expression names a system outside the supported set."""


class TypeParseError(DomainError):
    """Type expression does not match the grammar."""


class DegenerateFunctionalError(DomainError):
    """The order vector is orthogonal to some root."""

    def __init__(self, root):
        self.root = root
        super().__init__(f"order vector is orthogonal to root {fmt_vec(root)}")


def fmt_vec(v: Sequence) -> str:
    return "(" + ", ".join(_fmt_num(x) for x in v) + ")"


def _fmt_num(x) -> str:
    if isinstance(x, AlgebraicNumber) and not x.is_rational():
        return f"{float(x):.6g}"
    q = x.as_rational() if isinstance(x, AlgebraicNumber) else x
    return str(q)


def reflect(v: Vector, alpha: Vector) -> Vector:
    """s_alpha(v) for a unit vector alpha."""
    c = dot(v, alpha)
    if not c:
        return tuple(v)
    c = c + c
    return tuple(x - c * a for x, a in zip(v, alpha))


def reflection_matrix(alpha: Vector) -> list:
    n = len(alpha)
    one = alpha[0].field.one
    return [[(one if i == j else one - one) - 2 * alpha[i] * alpha[j] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class Block:
    """A coordinate block occupied by one irreducible factor."""

    label: str
    start: int
    stop: int


class PseudoRootSystem:
    """A finite set of unit vectors closed under its own reflections.

    Parameters
    ----------
    field : FieldSpec
        Field containing all coordinates.
    roots : sequence of vectors
        The set Phi.  Order is kept (it makes enumeration deterministic).
    type_label : str
        Human-readable type, e.g. ``"B2xA1"``.
    blocks : list of Block, optional
        Coordinate blocks of the irreducible factors.
    """

    def __init__(self, field: FieldSpec, roots: Sequence[Vector], type_label: str = "custom",
                 blocks: Optional[list] = None):
        self.field = field
        self.roots = tuple(tuple(field(x) for x in r) for r in roots)
        if not self.roots:
            raise DomainError("empty root system")
        self.ambient_dim = len(self.roots[0])
        self.type_label = type_label
        self.blocks = list(blocks) if blocks else [Block(type_label, 0, self.ambient_dim)]
        self.index = {r: i for i, r in enumerate(self.roots)}
        self._rank = None
        self.roots_float = np.array([[float(x) for x in r] for r in self.roots])

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = _rank([list(r) for r in self.roots])
        return self._rank

    def __len__(self) -> int:
        return len(self.roots)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.index

    def __repr__(self) -> str:
        return f"PseudoRootSystem({self.type_label}, |Phi|={len(self.roots)}, dim={self.ambient_dim})"

    def is_essential(self) -> bool:
        return self.rank == self.ambient_dim

    def vector(self, coords: Iterable) -> Vector:
        """Coerce coordinates (ints, rationals, decimal strings, field elements) into this field."""
        v = tuple(self.field(x) for x in coords)
        if len(v) != self.ambient_dim:
            raise DomainError(f"expected {self.ambient_dim} coordinates, got {len(v)}")
        return v

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "N": self.field.N,
            "roots": [[x.to_json()["coeffs"] for x in r] for r in self.roots],
        }


# ---------------------------------------------------------------------------
# constructors for irreducible types

def _units(n: int, F: FieldSpec) -> list:
    out = []
    for i in range(n):
        for s in (1, -1):
            v = [F.zero] * n
            v[i] = F(s)
            out.append(tuple(v))
    return out


def _pairs(n: int, F: FieldSpec, signs=((1, 1), (1, -1), (-1, 1), (-1, -1))) -> list:
    h = embed_cos(F, 1, 4)  # 1/sqrt2
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in signs:
            v = [F.zero] * n
            v[i] = si * h
            v[j] = sj * h
            out.append(tuple(v))
    return out


def _halves(n: int, F: FieldSpec, scale, parity: Optional[int] = None) -> list:
    out = []
    for signs in itertools.product((1, -1), repeat=n):
        if parity is not None and sum(s < 0 for s in signs) % 2 != parity:
            continue
        out.append(tuple(F(mpq(s, 2)) * scale for s in signs))
    return out


def _even_perms(n: int) -> list:
    out = []
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        if inv % 2 == 0:
            out.append(p)
    return out


def _golden_family(F: FieldSpec, base: Sequence, n: int) -> list:
    # all even permutations and sign changes of the nonzero entries of base/2
    out = set()
    for p in _even_perms(n):
        for signs in itertools.product((1, -1), repeat=n):
            v = tuple(signs[i] * base[p[i]] / 2 for i in range(n))
            out.add(v)
    return sorted(out, key=lambda v: tuple(float(x) for x in v))


def _type_A(k: int):
    if k == 1:
        F = make_field(1)
        return F, [(F(1),), (F(-1),)]
    F = make_field(4)
    h = embed_cos(F, 1, 4)
    roots = []
    for i, j in itertools.permutations(range(k + 1), 2):
        v = [F.zero] * (k + 1)
        v[i], v[j] = h, -h
        roots.append(tuple(v))
    return F, roots


def _type_B(k: int):
    if k == 1:
        return _type_A(1)
    F = make_field(4)
    return F, _units(k, F) + _pairs(k, F)


def _type_D(k: int):
    if k < 2:
        raise UnsupportedTypeError("D_k needs k >= 2")
    F = make_field(4)
    return F, _pairs(k, F)


def _type_I2(m: int):
    if m < 2:
        raise UnsupportedTypeError("I2(m) needs m >= 2")
    N = m if m % 2 == 0 else 2 * m
    F = make_field(N)
    roots = [(embed_cos(F, k, m), embed_sin(F, k, m)) for k in range(2 * m)]
    return F, roots


def _type_H(k: int):
    F = make_field(5)
    phi = F.theta  # golden ratio
    inv = phi - 1
    if k == 3:
        return F, _units(3, F) + _golden_family(F, (phi, F(1), inv), 3)
    if k == 4:
        return F, _units(4, F) + _halves(4, F, F(1)) + _golden_family(F, (phi, F(1), inv, F.zero), 4)
    raise UnsupportedTypeError(f"H{k} is not a finite Coxeter type")


def _type_F4():
    F = make_field(4)
    return F, _units(4, F) + _pairs(4, F) + _halves(4, F, F(1))


def _type_E(k: int):
    F = make_field(4)
    h = embed_cos(F, 1, 4)
    e8 = _pairs(8, F) + _halves(8, F, h, parity=0)
    if k == 8:
        return F, e8
    r1 = e8[0]
    keep = [r for r in e8 if not dot(r, r1)]
    if k == 7:
        return F, keep
    if k == 6:
        r2 = next(r for r in e8 if dot(r, r1) == F(mpq(-1, 2)))
        return F, [r for r in keep if not dot(r, r2)]
    raise UnsupportedTypeError(f"E{k} is not a finite Coxeter type")


_ATOM = re.compile(r"^(A|B|C|D|E|F|H)(\d+)$|^I2\((\d+)\)$")


def _build_atom(token: str, construct_only: bool):
    m = _ATOM.match(token)
    if not m:
        raise TypeParseError(f"cannot parse type atom {token!r}")
    if m.group(3):
        return _type_I2(int(m.group(3)))
    letter, k = m.group(1), int(m.group(2))
    if k < 1:
        raise TypeParseError(f"bad rank in {token!r}")
    if letter == "A":
        return _type_A(k)
    if letter in "BC":
        return _type_B(k)
    if letter == "D":
        return _type_D(k)
    if letter == "H":
        return _type_H(k)
    if letter == "F":
        if k != 4:
            raise UnsupportedTypeError(f"F{k} is not a finite Coxeter type")
        return _type_F4()
    if letter == "E":
        if k not in (6, 7, 8):
            raise UnsupportedTypeError(f"E{k} is not a finite Coxeter type")
        if not construct_only:
            raise UnsupportedTypeError(f"E{k} is available only with construct_only=True")
        return _type_E(k)
    raise TypeParseError(token)


def _tokenize(spec: str) -> list:
    s = spec.replace(" ", "").replace("×", "x")
    toks = []
    i = 0
    while i < len(s):
        if s.startswith("I2(", i):
            j = s.index(")", i)
            toks.append(s[i:j + 1])
            i = j + 1
        elif s[i] in "x^()":
            toks.append(s[i])
            i += 1
        else:
            m = re.match(r"[A-Z]\d+|\d+", s[i:])
            if not m:
                raise TypeParseError(f"unexpected character {s[i]!r} in {spec!r}")
            toks.append(m.group(0))
            i += len(m.group(0))
    return toks


class _Parser:
    def __init__(self, toks, construct_only):
        self.toks, self.pos, self.co = toks, 0, construct_only

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, want=None):
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise TypeParseError(f"expected {want or 'token'}, got {t!r}")
        self.pos += 1
        return t

    def product(self):
        out = self.power()
        while self.peek() == "x":
            self.take("x")
            out = product(out, self.power())
        return out

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            k = self.take()
            if not k.isdigit() or int(k) < 1:
                raise TypeParseError(f"bad exponent {k!r}")
            out = base
            for _ in range(int(k) - 1):
                out = product(out, base)
            return out
        return base

    def atom(self):
        t = self.take()
        if t == "(":
            out = self.product()
            self.take(")")
            return out
        F, roots = _build_atom(t, self.co)
        return PseudoRootSystem(F, roots, t)


def build_system(spec: str, construct_only: bool = False) -> PseudoRootSystem:
    """Build a normalized pseudo-root system from a type expression.

    Grammar: ``TYPE := Ak | Bk | Dk | I2(m) | H3 | H4 | F4 | TYPE x TYPE | TYPE ^ k``.
    Products occupy orthogonal coordinate blocks.

    Examples
    --------
    >>> len(build_system("I2(5)").roots)
    10
    >>> build_system("B2xA1").ambient_dim
    3
    """
    p = _Parser(_tokenize(spec), construct_only)
    out = p.product()
    if p.peek() is not None:
        raise TypeParseError(f"trailing input in {spec!r}")
    return out


def product(S1: PseudoRootSystem, S2: PseudoRootSystem) -> PseudoRootSystem:
    """Orthogonal product: roots of S1 in the first block, roots of S2 in the second."""
    F = common_field([S1.field.N, S2.field.N])
    n1, n2 = S1.ambient_dim, S2.ambient_dim
    z1, z2 = (F.zero,) * n1, (F.zero,) * n2
    roots = [tuple(F(x) for x in r) + z2 for r in S1.roots]
    roots += [z1 + tuple(F(x) for x in r) for r in S2.roots]
    blocks = list(S1.blocks) + [Block(b.label, b.start + n1, b.stop + n1) for b in S2.blocks]
    label = f"{S1.type_label}x{S2.type_label}"
    return PseudoRootSystem(F, roots, label, blocks)


# ---------------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    ok: bool
    violations: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate_system(S: PseudoRootSystem) -> ValidationReport:
    """Check unit norms, negation closure and reflection closure exactly.

    Every violation is listed as ``(kind, alpha, beta, image)``.
    """
    bad = []
    one = S.field.one
    for a in S.roots:
        if dot(a, a) != one:
            bad.append(("norm", a, None, dot(a, a)))
        if tuple(-x for x in a) not in S.index:
            bad.append(("negation", a, None, tuple(-x for x in a)))
    for b in S.roots:
        for a in S.roots:
            img = reflect(a, b)
            if img not in S.index:
                bad.append(("closure", a, b, img))
    return ValidationReport(not bad, bad)


def system_from_vectors(vectors: Sequence[Sequence], N: int = 1, label: str = "custom") -> PseudoRootSystem:
    """Wrap arbitrary vectors (no validation; see validate_system)."""
    return PseudoRootSystem(make_field(N), vectors, label)


# ---------------------------------------------------------------------------
# positive systems and arrangements

class PositiveSystem:
    """Positive roots Phi+ = {alpha : (t, alpha) > 0} for an order vector t."""

    def __init__(self, system: PseudoRootSystem, order_vector: Vector):
        self.system = system
        self.order_vector = tuple(order_vector)
        pos, signs = [], []
        for r in system.roots:
            s = dot(r, self.order_vector).sign()
            if s == 0:
                raise DegenerateFunctionalError(r)
            signs.append(s)
            if s > 0:
                pos.append(r)
        self.positive_roots = tuple(pos)
        self.is_positive = dict(zip(system.roots, (s > 0 for s in signs)))
        self.pos_index = {r: i for i, r in enumerate(self.positive_roots)}

    def __repr__(self) -> str:
        return f"PositiveSystem({self.system.type_label}, |Phi+|={len(self.positive_roots)})"

    def positive_representative(self, r: Vector) -> tuple:
        """Return (root in Phi+, sign) with root = sign * representative."""
        if self.is_positive[r]:
            return r, 1
        return tuple(-x for x in r), -1


def default_order_vector(S: PseudoRootSystem) -> Vector:
    """t = (1, eps, eps^2, ...) with a small exact eps that is generic for S."""
    F = S.field
    for d in (7, 11, 13, 17, 19, 23, 29, 31, 37):
        eps = mpq(1, d)
        t = tuple(F(eps ** i) for i in range(S.ambient_dim))
        if all(dot(r, t) for r in S.roots):
            return t
    raise DegenerateFunctionalError(S.roots[0])


def positive_system(S: PseudoRootSystem, t: Optional[Sequence] = None) -> PositiveSystem:
    """Positive system of S for the order vector t (default: a generic exact t)."""
    if t is None:
        t = default_order_vector(S)
    return PositiveSystem(S, S.vector(t))


class Arrangement:
    """The Coxeter arrangement {alpha^perp : alpha in Phi+} with base chamber T0."""

    def __init__(self, positive: PositiveSystem):
        self.positive = positive
        self.system = positive.system
        self.hyperplanes = positive.positive_roots

    def __repr__(self) -> str:
        return f"Arrangement({self.system.type_label}, {len(self.hyperplanes)} hyperplanes)"

    def base_chamber_contains(self, v: Vector, closed: bool = False) -> bool:
        for a in self.hyperplanes:
            s = dot(v, a).sign()
            if s < 0 or (s == 0 and not closed):
                return False
        return True

    def on_wall(self, v: Vector) -> Optional[Vector]:
        for a in self.hyperplanes:
            if not dot(v, a):
                return a
        return None


def arrangement(spec_or_system, t: Optional[Sequence] = None) -> Arrangement:
    S = build_system(spec_or_system) if isinstance(spec_or_system, str) else spec_or_system
    return Arrangement(positive_system(S, t))


def angle_cos2(u: Vector, v: Vector):
    """cos^2 of the angle between two vectors, exact."""
    d = dot(u, v)
    return d * d / (dot(u, u) * dot(v, v))
