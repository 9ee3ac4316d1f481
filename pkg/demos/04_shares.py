"""Sharing a pizza among m/2 people by taking every m-th slice.

Run:  python3 demos/04_shares.py

For I2(2m) with m even, the 4m sectors around a are dealt out so that
share r gets the sectors r, r + m, r + 2m, r + 3m.  Consecutive shares
get equal area.  Outside R0(a) a certificate matches them piece by piece;
inside, the areas agree exactly.
"""
from fractions import Fraction

from pizza.coxeter import enumerate_group
from pizza.dihedral import hirschhorn_shares
from pizza.engine import Body
from pizza.roots import arrangement

a = (Fraction(2, 10), Fraction(1, 10))
for m in (2, 4):
    A = arrangement(f"I2({2 * m})")
    F = A.system.field
    polygon = Body.orbit_polytope((F(2), F(Fraction(1, 2))), enumerate_group(A.positive))
    rep = hirschhorn_shares(m, 0, polygon, a)
    print(f"m={m} polygon: share areas {[float(x) for x in rep.areas]}, exact difference {rep.diff!r}")
    rep = hirschhorn_shares(m, 1, Body.ball(F(1)), a, n_samples=10**6, seed=3)
    print(f"m={m} disc:    share areas {[round(x, 4) for x in rep.areas]}, "
          f"difference {rep.diff:+.4f} +- {rep.diff_stderr:.4f}, certificate ok: {rep.verdict.ok}")
