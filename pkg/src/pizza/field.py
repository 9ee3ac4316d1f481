"""Exact arithmetic in the real cyclotomic fields Q(2cos(pi/N)).

Elements are stored in the power basis 1, theta, ..., theta^(d-1) of
theta = 2cos(pi/N), with rational coefficients.  The representation is
canonical, so equality is syntactic; signs are decided on the real
embedding by interval refinement.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath
from gmpy2 import mpq

from .errors import DomainError, ResourceError

DEGREE_CAP = 64

Rational = Union[int, mpq]


def _poly_divmod_int(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials (low -> high), den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    assert not any(num[: len(den) - 1]), "non-exact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def cyclotomic(M: int) -> tuple[int, ...]:
    """Integer coefficients (low -> high) of the M-th cyclotomic polynomial."""
    poly = [-1] + [0] * (M - 1) + [1]
    for d in range(1, M):
        if M % d == 0:
            poly = _poly_divmod_int(poly, list(cyclotomic(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def dickson(j: int) -> tuple[int, ...]:
    """D_j with D_j(z + 1/z) = z^j + z^-j, coefficients low -> high."""
    if j == 0:
        return (2,)
    if j == 1:
        return (0, 1)
    a, b = list(dickson(j - 1)), list(dickson(j - 2))
    out = [0] + a
    for i, c in enumerate(b):
        out[i] -= c
    return tuple(out)


def _min_poly(N: int) -> tuple[int, ...]:
    if N == 1:
        return (2, 1)  # theta = -2
    if N == 2:
        return (0, 1)  # theta = 0
    phi = cyclotomic(2 * N)
    d = (len(phi) - 1) // 2
    out = [0] * (d + 1)
    out[0] = phi[d]
    for k in range(1, d + 1):
        for i, c in enumerate(dickson(k)):
            out[i] += phi[d + k] * c
    return tuple(out)


class FieldSpec:
    """The field Q(theta), theta = 2cos(pi/N)."""

    __slots__ = ("N", "min_poly", "degree", "theta_float", "_neg_tail", "_zero", "_one")

    def __init__(self, N: int, min_poly: tuple[int, ...]):
        self.N = N
        self.min_poly = min_poly
        self.degree = len(min_poly) - 1
        self.theta_float = 2.0 * math.cos(math.pi / N)
        self._neg_tail = tuple(mpq(-c) for c in min_poly[:-1])
        self._zero = None
        self._one = None

    def __repr__(self) -> str:
        return f"FieldSpec(N={self.N}, degree={self.degree})"

    def __reduce__(self):
        return (make_field, (self.N,))

    @property
    def zero(self) -> "AlgebraicNumber":
        if self._zero is None:
            self._zero = AlgebraicNumber(self, (mpq(0),) * self.degree)
        return self._zero

    @property
    def one(self) -> "AlgebraicNumber":
        if self._one is None:
            self._one = self(1)
        return self._one

    @property
    def theta(self) -> "AlgebraicNumber":
        if self.degree == 1:
            return self(mpq(-2) if self.N == 1 else mpq(0))
        c = [mpq(0)] * self.degree
        c[1] = mpq(1)
        return AlgebraicNumber(self, tuple(c))

    def __call__(self, value) -> "AlgebraicNumber":
        """Coerce an int / rational / decimal string / element into the field."""
        if isinstance(value, AlgebraicNumber):
            if value.field is self:
                return value
            return lift(value, self)
        if isinstance(value, str):
            value = parse_rational(value)
        q = mpq(value)
        return AlgebraicNumber(self, (q,) + (mpq(0),) * (self.degree - 1))

    def mp_theta(self, dps: int):
        with mpmath.workdps(dps):
            return 2 * mpmath.cos(mpmath.pi / self.N)


@lru_cache(maxsize=None)
def make_field(N: int, cap: int = DEGREE_CAP) -> FieldSpec:
    """Return the field containing 2cos(k*pi/N) for every integer k."""
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    # degree is phi(2N)/2 for N >= 3
    deg = 1 if N <= 2 else _totient(2 * N) // 2
    if deg > cap:
        raise ResourceError(f"field degree {deg} for N={N} exceeds cap {cap}")
    return FieldSpec(N, _min_poly(N))


def _totient(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def parse_rational(text: str) -> mpq:
    """Parse '3', '-1/4', '0.35', '1e-3' exactly."""
    text = text.strip()
    if "/" in text:
        p, q = text.split("/")
        return mpq(int(p), int(q))
    from fractions import Fraction

    f = Fraction(text)
    return mpq(f.numerator, f.denominator)


class AlgebraicNumber:
    __slots__ = ("field", "coeffs", "_rat", "_iv")

    def __init__(self, field: FieldSpec, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs
        self._iv = None
        r = True
        for c in coeffs[1:]:
            if c:
                r = False
                break
        self._rat = r

    # -- coercion -----------------------------------------------------
    def _co(self, other) -> "AlgebraicNumber":
        if isinstance(other, AlgebraicNumber):
            if other.field is self.field:
                return other
            if other._rat:
                return self.field(other.coeffs[0])
            if self._rat:
                return other
            return _mismatch(self, other)
        if isinstance(other, (int, type(mpq(0)))):
            return self.field(other)
        from fractions import Fraction

        if isinstance(other, Fraction):
            return self.field(mpq(other.numerator, other.denominator))
        return NotImplemented

    def _wrap_pair(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return None, None
        a = self
        if isinstance(other, AlgebraicNumber) and other.field is not self.field:
            # one side rational: move it into the other's field
            if self._rat:
                a = other.field(self.coeffs[0])
                o = other
        return a, o

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        a, o = self._wrap_pair(other)
        if a is None:
            return NotImplemented
        if a._rat and o._rat:
            return AlgebraicNumber(a.field, (a.coeffs[0] + o.coeffs[0],) + a.coeffs[1:])
        return AlgebraicNumber(a.field, tuple(x + y for x, y in zip(a.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-x for x in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, o = self._wrap_pair(other)
        if a is None:
            return NotImplemented
        if a._rat and o._rat:
            return AlgebraicNumber(a.field, (a.coeffs[0] - o.coeffs[0],) + a.coeffs[1:])
        return AlgebraicNumber(a.field, tuple(x - y for x, y in zip(a.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        a, o = self._wrap_pair(other)
        if a is None:
            return NotImplemented
        if o._rat:
            c = o.coeffs[0]
            if a._rat:
                return AlgebraicNumber(a.field, (a.coeffs[0] * c,) + a.coeffs[1:])
            return AlgebraicNumber(a.field, tuple(x * c for x in a.coeffs))
        if a._rat:
            c = a.coeffs[0]
            return AlgebraicNumber(a.field, tuple(x * c for x in o.coeffs))
        return AlgebraicNumber(a.field, _mulmod(a.coeffs, o.coeffs, a.field))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self._rat:
            if not self.coeffs[0]:
                raise ZeroDivisionError("inverse of zero")
            return AlgebraicNumber(self.field, (1 / self.coeffs[0],) + self.coeffs[1:])
        return AlgebraicNumber(self.field, _invmod(self.coeffs, self.field))

    def __truediv__(self, other):
        a, o = self._wrap_pair(other)
        if a is None:
            return NotImplemented
        if o._rat:
            c = o.coeffs[0]
            if not c:
                raise ZeroDivisionError("division by zero")
            return AlgebraicNumber(a.field, tuple(x / c for x in a.coeffs))
        return a * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def sign(self) -> int:
        return sign_of(self)

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is self.field:
                return self.coeffs == other.coeffs
            if self._rat and other._rat:
                return self.coeffs[0] == other.coeffs[0]
            return False
        if isinstance(other, (int, type(mpq(0)))):
            return self._rat and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._rat:
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __lt__(self, other):
        return sign_of(self - other) < 0

    def __le__(self, other):
        return sign_of(self - other) <= 0

    def __gt__(self, other):
        return sign_of(self - other) > 0

    def __ge__(self, other):
        return sign_of(self - other) >= 0

    def __abs__(self):
        return -self if sign_of(self) < 0 else self

    # -- conversions ------------------------------------------------------
    def is_rational(self) -> bool:
        return self._rat

    def as_rational(self) -> mpq:
        if not self._rat:
            raise DomainError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __float__(self) -> float:
        if self._rat:
            return float(self.coeffs[0])
        t = self.field.theta_float
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps + 10):
            t = self.field.mp_theta(dps + 10)
            acc = mpmath.mpf(0)
            for c in reversed(self.coeffs):
                acc = acc * t + mpmath.mpf(int(c.numerator)) / int(c.denominator)
            return +acc

    def __repr__(self) -> str:
        if self._rat:
            return f"{self.coeffs[0]}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}")
        return f"({' + '.join(terms)})[N={self.field.N}]"

    def to_json(self) -> dict:
        return {"N": self.field.N, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}


def from_json(data: dict) -> AlgebraicNumber:
    field = make_field(int(data["N"]))
    coeffs = tuple(parse_rational(c) for c in data["coeffs"])
    if len(coeffs) != field.degree:
        raise DomainError("coefficient count does not match field degree")
    return AlgebraicNumber(field, coeffs)


def _mismatch(a, b):
    raise DomainError(f"field mismatch: N={a.field.N} vs N={b.field.N}; lift to a common field first")


def _mulmod(a: tuple, b: tuple, field: FieldSpec) -> tuple:
    d = field.degree
    prod = [mpq(0)] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    tail = field._neg_tail
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k]
        if c:
            base = k - d
            for i in range(d):
                if tail[i]:
                    prod[base + i] += c * tail[i]
    return tuple(prod[:d])


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        a.pop()
        _trim(a)
    return q, a


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _psub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([mpq(x) for x in out])


def _invmod(x: tuple, field: FieldSpec) -> tuple:
    # extended Euclid: s*x + t*m = 1
    m = [mpq(c) for c in field.min_poly]
    r0, r1 = m, _trim(list(x))
    s0, s1 = [], [mpq(1)]
    while len(r1) > 1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    if not r1:
        raise ZeroDivisionError("inverse of zero")
    c = r1[0]
    s = [y / c for y in s1]
    _, s = _pdivmod(s, m) if len(s) >= len(m) else (None, s)
    s = s + [mpq(0)] * (field.degree - len(s))
    return tuple(s)


def sign_of(x) -> int:
    """Sign of the real embedding theta = 2cos(pi/N); exact."""
    if not isinstance(x, AlgebraicNumber):
        return (x > 0) - (x < 0)
    if x._rat:
        c = x.coeffs[0]
        return (c > 0) - (c < 0)
    t = abs(x.field.theta_float)
    acc = 0.0
    bound = 0.0
    for c in reversed(x.coeffs):
        fc = float(c)
        acc = acc * x.field.theta_float + fc
        bound = bound * t + abs(fc)
    err = 8.0 * (x.field.degree + 2) * 2.2e-16 * bound + 1e-300
    if abs(acc) > 4 * err:
        return 1 if acc > 0 else -1
    return _sign_interval(x)


def float_interval(x) -> tuple:
    """(lo, hi) floats enclosing the real value of x."""
    if not isinstance(x, AlgebraicNumber):
        f = float(x)
        e = abs(f) * 4.5e-16 + 1e-300
        return f - e, f + e
    if x._iv is None:
        if x._rat:
            f = float(x.coeffs[0])
            e = abs(f) * 4.5e-16 + 1e-300
        else:
            t = abs(x.field.theta_float)
            f = 0.0
            bound = 0.0
            for c in reversed(x.coeffs):
                fc = float(c)
                f = f * x.field.theta_float + fc
                bound = bound * t + abs(fc)
            e = 16.0 * (x.field.degree + 2) * 2.2e-16 * bound + 1e-300
        x._iv = (f - e, f + e)
    return x._iv


def _sign_interval(x: AlgebraicNumber) -> int:
    prec = 120
    iv = mpmath.iv
    while True:
        old = iv.prec
        iv.prec = prec
        try:
            theta = 2 * iv.cos(iv.pi / x.field.N)
            acc = iv.mpf(0)
            for c in reversed(x.coeffs):
                acc = acc * theta + iv.mpf(int(c.numerator)) / int(c.denominator)
            lo, hi = acc.a, acc.b
        finally:
            iv.prec = old
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2
        if prec > 1 << 20:
            raise RuntimeError("sign refinement did not terminate")


def embed_cos(field: FieldSpec, k: int, M: int) -> AlgebraicNumber:
    """Exact cos(k*pi/M) in ``field``."""
    if M <= 0:
        raise DomainError("M must be positive")
    g = math.gcd(k, M)
    k, M = k // g, M // g
    if M in (1, 2, 3):
        val = {(1, 0): 1, (2, 1): 0, (3, 1): mpq(1, 2), (3, 2): mpq(-1, 2)}
        r = k % (2 * M)
        sgn = 1
        if r >= M:
            r -= M
            sgn = -1
        return field(sgn * mpq(val[(M, r)]))
    if field.N % M:
        raise DomainError(f"cos({k}pi/{M}) is not in Q(2cos(pi/{field.N}))")
    j = k * (field.N // M)
    # 2cos(j pi/N) = D_j(theta)
    t = field.theta
    acc = field.zero
    for c in reversed(dickson(abs(j))):
        acc = acc * t + c
    return acc / 2


def embed_sin(field: FieldSpec, k: int, M: int) -> AlgebraicNumber:
    """Exact sin(k*pi/M) = cos((M - 2k) pi / 2M)."""
    return embed_cos(field, M - 2 * k, 2 * M)


def lift(x: AlgebraicNumber, field: FieldSpec) -> AlgebraicNumber:
    """Re-express an element of a subfield Q(2cos(pi/N')) (N' | N) in ``field``."""
    src = x.field
    if src is field:
        return x
    if x._rat:
        return field(x.coeffs[0])
    if field.N % src.N:
        raise DomainError(f"Q(2cos(pi/{src.N})) is not a subfield of Q(2cos(pi/{field.N}))")
    # theta_src = D_{N/N'}(theta)
    t = field.theta
    ts = field.zero
    for c in reversed(dickson(field.N // src.N)):
        ts = ts * t + c
    acc = field.zero
    for c in reversed(x.coeffs):
        acc = acc * ts + c
    return acc


def common_field(Ns: Iterable[int]) -> FieldSpec:
    N = 1
    for n in Ns:
        N = N * n // math.gcd(N, n)
    return make_field(N)


def to_field(values: Sequence, field: FieldSpec) -> tuple:
    return tuple(field(v) for v in values)
