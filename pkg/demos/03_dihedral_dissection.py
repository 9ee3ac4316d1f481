"""Explicit dissections for the dihedral arrangement I2(2m).

Run:  python3 demos/03_dihedral_dissection.py [m] [out.svg]

Outside the convex hull R0(a) of the orbit of the origin, the signed
pieces cancel in pairs by reflections and rotations about a.  Inside
R0(a), a second family of pieces does the same.  Both certificates are
checked exactly by the verifier, and the residual alternating sum is
recomputed independently by the chamber-sum engine.
"""
import sys
from fractions import Fraction

from pizza.certificate import verify_certificate
from pizza.dihedral import (angle_checks, frederickson_certificate, implied_sum, outer_cancellation_certificate,
                            q_chain_check)
from pizza.svg import certificate_svg

m = int(sys.argv[1]) if len(sys.argv) > 1 else 4
a = (Fraction(3, 10), Fraction(2, 10))

outer = outer_cancellation_certificate(m, a)
inner = frederickson_certificate(m, a)
for cert in (outer, inner):
    v = verify_certificate(cert)
    print(f"{cert.kind:13s} pieces={len(cert.pieces):3d} pairings={len(cert.pairings):3d} verified={v.ok}")

s = implied_sum(m, a, outer=outer, fred=inner)
print(f"signed area from the pieces: {s.pieces_value!r}, from the engine: {s.engine_value!r}")

rows = angle_checks(m, a)
print(f"vertex angles match their closed forms: {sum(r[3] for r in rows)}/{len(rows)}")
# consecutive inner quadrilaterals are rotations of each other only at odd steps
print("rotation chain:", " ".join(f"{i}:{'ok' if ok else 'no'}" for i, ok in q_chain_check(m, a)))

if len(sys.argv) > 2:
    with open(sys.argv[2], "w") as fh:
        fh.write(certificate_svg(inner, m=m))
    print("wrote", sys.argv[2])
