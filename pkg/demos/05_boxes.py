"""Cutting rectangles by translations, and classes of boxes.

Run:  python3 demos/05_boxes.py

An 8 x 3 rectangle is re-tiled into a 6 x 4 one with three pieces moved
by translations.  Signed lists of boxes are compared through the vector
(chi, V_1, ..., V_n).  A half-open box only remembers its volume, while
a closed one also remembers its lower intrinsic volumes.
"""
from pizza.bolyai import Parallelotope, kz_equal, kz_vector, polygon_to_rectangle, rectangle_retile
from pizza.certificate import verify_certificate
from pizza.field import make_field

Q = make_field(1)
cert = rectangle_retile(Q(8), Q(3), Q(6))
print(f"8x3 -> 6x4: {len(cert.pairings)} pieces, translations only: {cert.translation_only}, "
      f"verified: {verify_certificate(cert).ok}")

pent = polygon_to_rectangle([(0, 0), (4, 0), (5, 2), (2, 4), (-1, 2)], width=2)
print(f"pentagon -> 2 x {pent.params['height']!r} rectangle with {len(pent.pairings)} pieces, "
      f"verified: {verify_certificate(pent).ok}")

half = [Parallelotope.box((0, 0), (1, 6), closed=False)], [Parallelotope.box((0, 0), (2, 3), closed=False)]
closed = [Parallelotope.box((0, 0), (1, 6))], [Parallelotope.box((0, 0), (2, 3))]
for name, (x, y) in (("half-open", half), ("closed", closed)):
    print(f"{name:9s} 1x6 {kz_vector(x).floats()} vs 2x3 {kz_vector(y).floats()}: equal = {kz_equal(x, y)}")
