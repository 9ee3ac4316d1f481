import pytest

from pizza.coxeter import enumerate_group
from pizza.roots import arrangement
from pizza.twostruct import (brute_force_two_structures, check_condition_b, enumerate_two_structures,
                             find_base_two_structure)


def _setup(t):
    A = arrangement(t)
    W = enumerate_group(A.positive)
    return A, W


@pytest.mark.parametrize("t,count,label", [("B2", 1, "B2"), ("B3", 3, "A1xB2"), ("I2(6)", 3, "A1xA1"),
                                           ("I2(8)", 1, "I2(8)"), ("A1^2", 1, "A1xA1"), ("D4", 3, None)])
def test_counts_match_brute_force(t, count, label):
    A, W = _setup(t)
    orbit = enumerate_two_structures(A.positive, W)
    brute = brute_force_two_structures(A.positive, W)
    assert len(orbit) == count
    # brute force may also see lower-rank families; compare the full-rank ones
    full = {p.roots for p in brute if len(p.roots) == len(orbit[0].roots)}
    assert {p.roots for p in orbit} == full
    if label:
        assert {p.type_label for p in orbit} == {label}


def test_base_structures():
    for t in ("B2", "A1^3", "I2(8)"):
        A, W = _setup(t)
        base = find_base_two_structure(A.positive, W)
        assert len(base.roots) == len(A.system.roots)


def test_condition_b():
    A, W = _setup("B2")
    S = A.system
    axes = frozenset(i for i, r in enumerate(S.roots) if sum(1 for x in r if x) == 1)
    ok, wit = check_condition_b(axes, W)
    assert not ok and wit.det == -1
    A3, W3 = _setup("B3")
    base = find_base_two_structure(A3.positive, W3)
    assert check_condition_b(base.roots, W3)[0]
    A8, W8 = _setup("I2(8)")
    assert check_condition_b(frozenset(range(len(A8.system.roots))), W8)[0]


def test_epsilon():
    A, W = _setup("A1^3")
    (phi,) = enumerate_two_structures(A.positive, W)
    assert phi.epsilon == 1
    for t in ("B3", "I2(6)"):
        A, W = _setup(t)
        phis = enumerate_two_structures(A.positive, W)
        assert phis[0].epsilon == 1
        for phi in phis:
            assert phi.transporter.det == phi.epsilon


def test_i26_structures_are_perpendicular_pairs():
    A, W = _setup("I2(6)")
    S = A.system
    for phi in enumerate_two_structures(A.positive, W):
        u, v = phi.positive_vectors(S)
        assert sum(x * y for x, y in zip(u, v)) == 0
