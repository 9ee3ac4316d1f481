"""2-structures and the signed expansion of a chamber sum.

Run:  python3 demos/02_two_structures.py

A 2-structure is an orthogonal family of rank-one and dihedral pieces of
the root system.  The group permutes them transitively, and each one
carries a sign.  The alternating chamber indicator of the whole
arrangement equals the signed sum of the indicators of the smaller
arrangements, which we check point by point.
"""
import random
from fractions import Fraction

from pizza.coxeter import enumerate_group
from pizza.engine import expansion_check_pointwise, f_polynomial
from pizza.roots import arrangement
from pizza.twostruct import enumerate_two_structures

for t in ("B3", "I2(6)", "D4"):
    A = arrangement(t)
    W = enumerate_group(A.positive)
    phis = enumerate_two_structures(A.positive, W)
    print(f"{t}: {len(phis)} two-structures")
    for phi in phis:
        print(f"  type {phi.type_label:8s} eps = {phi.epsilon:+d}  roots {sorted(phi.roots)}")
    rng = random.Random(0)
    F = A.system.field
    n = A.system.ambient_dim
    pts = [tuple(F(Fraction(rng.randint(-99, 99), 97)) + F(Fraction(i + 1, 7919)) for i in range(n))
           for _ in range(200)]
    print(f"  expansion holds at {sum(expansion_check_pointwise(A, phis, x)[0] for x in pts)}/200 points")

# for D4 every 2-structure is a product of A1 factors and the
# polynomial sum_phi eps(phi) prod 2(a, e) must vanish identically
A = arrangement("D4")
f, zero = f_polynomial(A, enumerate_two_structures(A.positive, enumerate_group(A.positive)))
print("D4 polynomial:", f, "(identically zero)" if zero else "")
