import itertools
import math
import random

import pytest

from pizza.coxeter import NonEssentialError, chamber_sign_at, chambers_with_signs, enumerate_group, has_minus_id, inversion_set
from pizza.errors import ResourceError
from pizza.roots import arrangement


def _group(t):
    A = arrangement(t)
    return A, enumerate_group(A.positive)


def _signed_permutation_matrices(n):
    out = set()
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            out.add(tuple(tuple(signs[i] if perm[i] == j else 0 for j in range(n)) for i in range(n)))
    return out


def test_orders():
    assert len(_group("I2(4)")[1]) == 8
    assert len(_group("H3")[1]) == 120
    A, W = _group("B3")
    oracle = _signed_permutation_matrices(3)
    mats = {tuple(tuple(int(x.as_rational()) for x in row) for row in w.matrix) for w in W.elements}
    assert len(W) == len(oracle) == 48
    assert mats == oracle


def test_minus_identity():
    assert has_minus_id(_group("B2")[1])
    assert not has_minus_id(_group("A2")[1])
    assert has_minus_id(_group("D4")[1])


def test_chambers():
    A, W = _group("I2(4)")
    ch = chambers_with_signs(A, W)
    assert len(ch) == 8
    # walk around the origin: signs alternate
    pts = [(math.cos((k + 0.5) * math.pi / 4), math.sin((k + 0.5) * math.pi / 4)) for k in range(8)]
    F = A.system.field
    signs = [chamber_sign_at(A, tuple(F(str(round(c, 6))) for c in p)) for p in pts]
    assert all(signs[k] == -signs[k + 1] for k in range(7))
    A3, W3 = _group("A1^3")
    for c in chambers_with_signs(A3, W3):
        x = c.element(tuple(A3.system.field(1) for _ in range(3)))
        prod = 1
        for v in x:
            prod *= v.sign()
        assert c.sign == prod
    B3, WB = _group("B3")
    signs = [c.sign for c in chambers_with_signs(B3, WB)]
    assert signs.count(1) == signs.count(-1) == 24


def test_inversion_sets():
    A, W = _group("B2")
    e = [w for w in W.elements if all(w.perm[i] == i for i in range(len(w.perm)))][0]
    assert inversion_set(e) == []
    for s in W.reflections:
        assert len(inversion_set(s)) % 2 == 1
    minus = [w for w in W.elements if all(w.matrix[i][j] == (-1 if i == j else 0) for i in range(2) for j in range(2))]
    assert len(inversion_set(minus[0])) == 4


@pytest.mark.parametrize("t", ["B2", "A1^3", "B3", "I2(6)"])
def test_sign_equals_determinant_and_parity(t):
    A, W = _group(t)
    rng = random.Random(3)
    for c in chambers_with_signs(A, W):
        assert c.sign == c.element.det == (-1) ** len(c.separating_set)
    F = A.system.field
    for _ in range(20):
        x = tuple(F(rng.randint(-50, 50)) + F(1) / 997 * k for k in range(1, A.system.ambient_dim + 1))
        s = chamber_sign_at(A, x)
        if s:
            w = [c for c in chambers_with_signs(A, W) if c.h_rep.contains(x)]
            assert len(w) == 1 and w[0].sign == s


def test_non_essential_rejected():
    A, W = _group("A3")
    with pytest.raises(NonEssentialError):
        chambers_with_signs(A, W)


def test_group_cap():
    A = arrangement("B3")
    with pytest.raises(ResourceError):
        enumerate_group(A.positive, cap=10)
