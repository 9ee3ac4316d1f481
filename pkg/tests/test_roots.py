import itertools

import numpy as np
import pytest

from pizza.field import embed_cos, make_field
from pizza.roots import (DegenerateFunctionalError, TypeParseError, arrangement, build_system, positive_system,
                         product, system_from_vectors, validate_system)


def _orbit_closure_count(simple):
    # independent float oracle: close a simple system under its reflections
    roots = [np.array(r, dtype=float) for r in simple]
    roots += [-r for r in roots]
    seen = {tuple(np.round(r, 9)) for r in roots}
    frontier = list(roots)
    while frontier:
        new = []
        for a in list(roots):
            for b in frontier:
                img = b - 2 * np.dot(a, b) * a
                key = tuple(np.round(img, 9))
                if key not in seen:
                    seen.add(key)
                    new.append(img)
        roots += new
        frontier = new
    return len(seen)


def test_root_counts():
    assert len(build_system("I2(5)").roots) == 10
    B2 = build_system("B2")
    assert len(B2.roots) == 8 and B2.field.N % 4 == 0
    tau = (1 + 5 ** 0.5) / 2
    a1 = np.array([1.0, 0, 0])
    a2 = np.array([-tau, tau - 1, -1]) / 2
    a3 = np.array([0, 0, 1.0])
    assert len(build_system("H3").roots) == _orbit_closure_count([a1, a2, a3]) == 30


@pytest.mark.parametrize("t", ["A1", "A2", "A3", "B2", "B3", "D4", "F4", "H3", "I2(5)", "I2(8)", "B2xA1", "A1^3"])
def test_supported_types_validate(t):
    assert validate_system(build_system(t)).ok


def test_validation_failures():
    F = make_field(4)
    s = embed_cos(F, 1, 4)
    vecs = [(1, 0), (-1, 0), (s, s), (-s, -s)]
    rep = validate_system(system_from_vectors(vecs, 4))
    assert not rep.ok
    assert any(kind == "closure" for kind, *_ in rep.violations)
    rep = validate_system(system_from_vectors([(2, 0), (-2, 0)]))
    assert any(kind == "norm" for kind, *_ in rep.violations)


def test_positive_systems():
    P = positive_system(build_system("A1^2"), (2, 1))
    assert set(P.positive_roots) == {(1, 0), (0, 1)}
    assert len(arrangement("I2(4)").hyperplanes) == 4
    with pytest.raises(DegenerateFunctionalError):
        positive_system(build_system("B2"), (1, 1))


def test_products():
    A1, I4 = build_system("A1"), build_system("I2(4)")
    assert len(product(A1, I4).roots) == 10
    B2A1 = build_system("B2xA1")
    assert B2A1.rank == 3
    X, Y, Z = build_system("A1"), build_system("B2"), build_system("A2")
    left, right = product(product(X, Y), Z), product(X, product(Y, Z))
    assert left.roots == right.roots


def test_parse_errors():
    for bad in ["Q7", "I2(", "B2xx", ""]:
        with pytest.raises(Exception) as exc:
            build_system(bad)
        assert isinstance(exc.value, (TypeParseError, ValueError))


@pytest.mark.parametrize("t", ["B2", "A3", "H3"])
def test_reflections_permute_roots(t):
    S = build_system(t)
    idx = set(S.roots)
    for a, b in itertools.islice(itertools.product(S.roots, S.roots), 200):
        d = sum(x * y for x, y in zip(a, b))
        img = tuple(y - 2 * d * x for x, y in zip(a, b))
        assert img in idx
