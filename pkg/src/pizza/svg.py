"""SVG 1.1 drawings of planar certificates.

Sectors of the dihedral arrangement are shaded (darker for positive
sign), then every piece is outlined and labelled.  Unbounded pieces are
clipped to the view box.
"""
from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape

from .regions import HalfOpenRegion, RegionSet, order_polygon

POS_FILL = "#9a9a9a"
NEG_FILL = "#e4e4e4"
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def _view_region(box, F) -> HalfOpenRegion:
    x0, y0, x1, y1 = box
    return HalfOpenRegion.box([F(x0), F(y0)], [F(x1), F(y1)], F).mark_bounded()


def _polys(R: RegionSet, view: HalfOpenRegion) -> list:
    out = []
    for p in R.intersect(view).closure_pieces().pieces:
        if p.is_empty():
            continue
        V = p.vertices()
        if len(V) >= 3:
            out.append([(float(x), float(y)) for x, y in order_polygon(V)])
    return out


def _bbox(cert) -> tuple:
    xs, ys = [], []
    for p in cert.pieces.values():
        for q in p.region.pieces:
            if q.is_bounded():
                for v in q.vertices():
                    xs.append(float(v[0]))
                    ys.append(float(v[1]))
    if not xs:
        return (-2.0, -2.0, 2.0, 2.0)
    w = max(max(xs) - min(xs), max(ys) - min(ys), 1e-3)
    pad = 0.25 * w
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def certificate_svg(cert, m: Optional[int] = None, box: Optional[tuple] = None, size: int = 640) -> str:
    """Render a 2-D certificate; ``m`` adds the shaded sectors of I2(2m)."""
    F = cert.field
    box = box or _bbox(cert)
    x0, y0, x1, y1 = box
    scale = size / max(x1 - x0, y1 - y0)
    view = _view_region(tuple(F(str(round(v, 6))) for v in box), F)

    def pt(p):
        return f"{(p[0] - x0) * scale:.3f},{(y1 - p[1]) * scale:.3f}"

    W = int((x1 - x0) * scale)
    H = int((y1 - y0) * scale)
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}">']
    if m is not None:
        from .dihedral import DihedralFrame

        fr = DihedralFrame(m, F)
        for i in range(4 * m):
            fill = POS_FILL if fr.sign(i) > 0 else NEG_FILL
            for poly in _polys(RegionSet.of(fr.sector(i, closed=True)), view):
                out.append(f'<polygon points="{" ".join(pt(p) for p in poly)}" fill="{fill}" stroke="none"/>')
    for k, p in enumerate(cert.pieces.values()):
        color = PALETTE[k % len(PALETTE)]
        for poly in _polys(p.region, view):
            pts = " ".join(pt(q) for q in poly)
            out.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="0.15" stroke="{color}" '
                       f'stroke-width="1"/>')
            cx = sum(q[0] for q in poly) / len(poly)
            cy = sum(q[1] for q in poly) / len(poly)
            out.append(f'<text x="{(cx - x0) * scale:.1f}" y="{(y1 - cy) * scale:.1f}" font-size="10" '
                       f'text-anchor="middle">{escape(p.id)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
