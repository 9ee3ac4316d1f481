"""Alternating chamber sums of symmetric bodies.

Run:  python3 demos/01_alternating_sums.py

A body K stable under a reflection group W is shifted by a point a.  We
colour the chambers of the arrangement by the parity of their group
element and add up the signed volumes of the pieces of K + a.  When -id
lies in W the sum is exactly zero; for products of A1 factors it is the
volume of a small half-open box instead.
"""
from fractions import Fraction

from pizza.coxeter import enumerate_group
from pizza.engine import Body, a1n_closed_form, pizza_sum
from pizza.roots import arrangement


def exact_demo():
    print("exact alternating sums over orbit polytopes")
    for t, p in [("B2", (2, Fraction(1, 2))), ("I2(6)", (2, 1)), ("B3", (3, 2, 1))]:
        A = arrangement(t)
        W = enumerate_group(A.positive)
        F = A.system.field
        K = Body.orbit_polytope(tuple(F(x) for x in p), W)
        a = tuple(F(Fraction(k, 10)) for k in (3, 1, 2)[:A.system.ambient_dim])
        r = pizza_sum(A, K, a, W=W)
        print(f"  {t:6s} |W| = {len(W):3d}  chambers = {r.n_terms:3d}  sum = {r.value!r}")


def box_demo():
    # without -id nothing cancels: the sum is the box prod (0, 2(a, e_i)]
    A = arrangement("A1^2")
    W = enumerate_group(A.positive)
    F = A.system.field
    a = (F(Fraction(2, 10)), F(Fraction(1, 10)))
    r = pizza_sum(A, Body.box(1, 2, F), a, W=W)
    value, coef, _ = a1n_closed_form(a, A.positive)
    print(f"A1^2 with a = (0.2, 0.1): sum = {r.value!r}, closed form = {value!r}")


def disc_demo():
    # a disc is not a polytope, so we estimate with a seeded Monte Carlo run
    A = arrangement("I2(8)")
    F = A.system.field
    r = pizza_sum(A, Body.ball(F(1)), (F(Fraction(3, 10)), F(Fraction(1, 10))), method="mc",
                  n_samples=2 * 10**6, seed=1)
    print(f"I2(8) unit disc: {r.value:+.5f} +- {r.stderr:.5f}")


if __name__ == "__main__":
    exact_demo()
    box_demo()
    disc_demo()
