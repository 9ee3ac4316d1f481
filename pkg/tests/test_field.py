import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from pizza.errors import DomainError
from pizza.field import embed_cos, embed_sin, lift, make_field, parse_rational, sign_of
from pizza.linalg import det, identity, solve
from pizza.roots import reflection_matrix

F4 = make_field(4)
F8 = make_field(8)
F24 = make_field(24)

rats = st.fractions(min_value=-20, max_value=20, max_denominator=50)


def _conjugate_count(N):
    # distinct real values of 2cos(k pi / N), gcd(k, 2N) = 1: the Galois orbit of theta
    vals = {round(2 * math.cos(k * math.pi / N), 9) for k in range(1, 2 * N) if math.gcd(k, 2 * N) == 1}
    return len(vals)


def test_field_degrees():
    assert F4.degree == 2
    assert F4.theta * F4.theta == F4(2)
    F2 = make_field(2)
    assert F2.degree == 1 and F2.theta == F2.zero
    for N in (3, 5, 8, 12, 16):
        assert make_field(N).degree == _conjugate_count(N)


def test_embed_cos_known_values():
    c = embed_cos(F4, 1, 4)
    assert c * c == F4(Fraction(1, 2))
    F5 = make_field(5)
    phi = 2 * embed_cos(F5, 1, 5)
    assert phi * phi == phi + 1
    assert sign_of(phi - 1) == 1
    F12 = make_field(12)
    s3 = embed_cos(F12, 1, 6)
    assert s3 * s3 == F12(Fraction(3, 4))


def test_embed_cos_rejects_foreign_angles():
    with pytest.raises(DomainError):
        embed_cos(F4, 1, 5)


@pytest.mark.parametrize("k", range(0, 48, 5))
def test_embed_cos_sin_match_floats(k):
    assert float(embed_cos(F24, k, 24)) == pytest.approx(math.cos(k * math.pi / 24), abs=1e-12)
    assert float(embed_sin(F24, k, 24)) == pytest.approx(math.sin(k * math.pi / 24), abs=1e-12)


def test_sign_of():
    assert sign_of(F4.zero) == 0
    assert sign_of(2 * embed_cos(F4, 1, 4) - 1) == 1
    x = 2 * embed_cos(F24, 1, 8) - 2 * embed_cos(F24, 1, 12)
    with mpmath.workdps(50):
        ref = 2 * mpmath.cos(mpmath.pi / 8) - 2 * mpmath.cos(mpmath.pi / 12)
    assert sign_of(x) == -1 == (1 if ref > 0 else -1)


def test_parse_rational_is_exact():
    assert parse_rational("0.35") == Fraction(7, 20)
    assert parse_rational("-1/4") == Fraction(-1, 4)
    assert parse_rational("1e-3") == Fraction(1, 1000)


def test_lift_preserves_value():
    x = embed_cos(F4, 1, 4) * 3 + F4(Fraction(1, 7))
    y = lift(x, F8)
    assert y.field is F8
    assert float(y) == pytest.approx(float(x), abs=1e-14)
    assert lift(x, F8) * lift(x, F8) == lift(x * x, F8)


def test_determinants():
    assert det(identity(3, F4.one)) == 1
    s = embed_cos(F4, 1, 4)
    assert det(reflection_matrix((s, s))) == -1
    F6 = make_field(6)
    r1 = reflection_matrix((F6.one, F6.zero))
    r2 = reflection_matrix((embed_cos(F6, 1, 6), embed_sin(F6, 1, 6)))
    rot = [[sum(r1[i][k] * r2[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert det(rot) == 1


@given(rats, rats, rats, rats)
def test_field_axioms(a, b, c, d):
    s = embed_cos(F8, 1, 8)
    x = F8(a) + F8(b) * s
    y = F8(c) + F8(d) * s * s * s
    assert (x + y) - y == x
    assert x * y == y * x
    if y:
        assert (x / y) * y == x
    assert sign_of(x - y) == -sign_of(y - x)
    assert float(x * y) == pytest.approx(float(x) * float(y), rel=1e-9, abs=1e-9)


@given(st.lists(rats, min_size=4, max_size=4), st.lists(rats, min_size=2, max_size=2))
def test_solve_roundtrip(m, b):
    A = [[F4(m[0]), F4(m[1])], [F4(m[2]), F4(m[3]) + embed_cos(F4, 1, 4)]]
    if not det(A):
        return
    bb = (F4(b[0]), F4(b[1]))
    x = solve(A, bb)
    assert tuple(A[i][0] * x[0] + A[i][1] * x[1] for i in range(2)) == bb
