"""Dissection certificates and their exact checker.

A certificate lists pieces, a perfect matching of ``+`` pieces with ``-``
pieces by isometries, and partition claims saying that a region is the
disjoint union of some pieces.  ``verify_certificate`` re-derives every
claim with exact arithmetic and reports all failures it finds.

Two modes are supported.  In ``exact`` mode pieces are half-open and
partitions are set partitions.  In ``mod_boundary`` mode pieces are closed
polygons whose interiors are disjoint and whose union is the region; this
is the classical scissors-congruence convention.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .errors import ValidationError
from .field import FieldSpec, from_json, make_field
from .isometry import AffineIsometry
from .regions import Constraint, HalfOpenRegion, RegionSet

SCHEMA = 1


@dataclass
class DissectionPiece:
    id: str
    region: RegionSet
    label: str
    side: int = 0  # +1 or -1 in the matching, 0 if unmatched
    chamber: Optional[int] = None

    def to_json(self) -> dict:
        return {"id": self.id, "label": self.label, "side": self.side, "chamber": self.chamber,
                "region": self.region.to_json()}


@dataclass
class Pairing:
    src: str
    dst: str
    isometry: AffineIsometry


@dataclass
class PartitionClaim:
    name: str
    region: RegionSet
    piece_ids: list


@dataclass
class DissectionCertificate:
    """Pieces, pairings and partition claims for one construction."""

    kind: str
    field: FieldSpec
    pieces: dict = dc_field(default_factory=dict)
    pairings: list = dc_field(default_factory=list)
    claims: list = dc_field(default_factory=list)
    mode: str = "exact"
    proxy: Optional[HalfOpenRegion] = None
    translation_only: bool = False
    params: dict = dc_field(default_factory=dict)

    def add_piece(self, pid: str, region, label: str = "", side: int = 0, chamber=None) -> DissectionPiece:
        if pid in self.pieces:
            raise ValidationError(f"duplicate piece id {pid}")
        p = DissectionPiece(pid, RegionSet.of(region), label or pid, side, chamber)
        self.pieces[pid] = p
        return p

    def pair(self, src: str, dst: str, g: AffineIsometry) -> None:
        self.pairings.append(Pairing(src, dst, g))

    def claim(self, name: str, region, piece_ids) -> None:
        self.claims.append(PartitionClaim(name, RegionSet.of(region), list(piece_ids)))

    def side_volume(self, side: int):
        """Sum of proxy volumes of the pieces on one side."""
        acc = self.field.zero
        for p in self.pieces.values():
            if p.side == side:
                acc = acc + _proxy_volume(p.region, self.proxy)
        return acc

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        params = {}
        for k, v in self.params.items():
            if isinstance(v, (tuple, list)) and v and hasattr(v[0], "to_json"):
                params[k] = [x.to_json() for x in v]
            else:
                params[k] = v
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "N": self.field.N,
            "mode": self.mode,
            "translation_only": self.translation_only,
            "params": params,
            "proxy": self.proxy.to_json() if self.proxy is not None else None,
            "pieces": [p.to_json() for p in self.pieces.values()],
            "pairings": [{"src": q.src, "dst": q.dst, "isometry": q.isometry.to_json()} for q in self.pairings],
            "claims": [{"name": c.name, "region": c.region.to_json(), "pieces": c.piece_ids} for c in self.claims],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "DissectionCertificate":
        if data.get("schema") != SCHEMA:
            raise ValidationError(f"unsupported certificate schema {data.get('schema')!r}")
        F = make_field(int(data["N"]))
        params = {}
        for k, v in data.get("params", {}).items():
            if isinstance(v, list) and v and isinstance(v[0], dict) and "coeffs" in v[0]:
                params[k] = tuple(F(from_json(x)) for x in v)
            else:
                params[k] = v
        proxy = HalfOpenRegion.from_json(data["proxy"]) if data.get("proxy") else None
        if proxy is not None:
            proxy.mark_bounded()
        cert = cls(data["kind"], F, mode=data.get("mode", "exact"), proxy=proxy,
                   translation_only=bool(data.get("translation_only")), params=params)
        for p in data["pieces"]:
            cert.add_piece(p["id"], RegionSet.from_json(p["region"]), p["label"], int(p["side"]), p.get("chamber"))
        for q in data["pairings"]:
            cert.pair(q["src"], q["dst"], AffineIsometry.from_json(q["isometry"], F))
        for c in data["claims"]:
            cert.claim(c["name"], RegionSet.from_json(c["region"]), c["pieces"])
        return cert

    @classmethod
    def loads(cls, text: str) -> "DissectionCertificate":
        return cls.from_json(json.loads(text))


@dataclass
class Verdict:
    ok: bool
    failures: list
    n_pairings: int = 0
    n_claims: int = 0

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": self.failures, "pairings_checked": self.n_pairings,
                "claims_checked": self.n_claims}


def _interior(R: RegionSet) -> RegionSet:
    out = []
    for p in R.pieces:
        strict = [Constraint(c.normal, c.offset, True) for c in p.constraints]
        out.append(p._inherit(HalfOpenRegion(p.dim, strict, p.field)))
    return RegionSet(out, R.dim)


def _bounded_part(R: RegionSet, proxy: Optional[HalfOpenRegion]) -> RegionSet:
    if R.is_bounded():
        return R
    if proxy is None:
        raise ValidationError("unbounded piece without a bounded proxy")
    return R.intersect(proxy)


def _proxy_volume(R: RegionSet, proxy):
    return _bounded_part(R, proxy).volume()


def _proxy_chi(R: RegionSet, proxy) -> int:
    return _bounded_part(R, proxy).euler_cs()


def verify_certificate(cert: DissectionCertificate, check_congruence: bool = True) -> Verdict:
    """Check pairings, partition claims and isometry provenance exactly."""
    fails = []
    pieces = cert.pieces
    mode = cert.mode

    # matching: every signed piece in exactly one pairing, + to -
    used = {}
    for q in cert.pairings:
        for pid in (q.src, q.dst):
            if pid not in pieces:
                fails.append(f"pairing refers to unknown piece {pid}")
            used[pid] = used.get(pid, 0) + 1
        if q.src in pieces and q.dst in pieces and (pieces[q.src].side, pieces[q.dst].side) != (1, -1):
            fails.append(f"pairing {q.src}->{q.dst} does not join a + piece to a - piece")
    for pid, p in pieces.items():
        if p.side and used.get(pid, 0) != 1:
            fails.append(f"piece {pid} occurs in {used.get(pid, 0)} pairings (expected 1)")

    # (3) provenance
    for q in cert.pairings:
        ok, msg = q.isometry.provenance_ok()
        if not ok:
            fails.append(f"isometry {q.isometry.label!r} for {q.src}->{q.dst}: {msg}")
        if cert.translation_only and not q.isometry.is_translation():
            fails.append(f"pairing {q.src}->{q.dst} is not a translation")

    # (1) pairings
    for q in cert.pairings:
        if q.src not in pieces or q.dst not in pieces:
            continue
        src, dst = pieces[q.src].region, pieces[q.dst].region
        img = q.isometry.apply_region(src)
        if not img.equals(dst):
            fails.append(f"pairing {q.src}->{q.dst}: image under {q.isometry.label!r} differs from target")
            continue
        if check_congruence and src.is_bounded():
            if src.volume() != dst.volume():
                fails.append(f"pairing {q.src}->{q.dst}: volumes differ")
            if mode == "exact" and src.euler_cs() != dst.euler_cs():
                fails.append(f"pairing {q.src}->{q.dst}: Euler characteristics differ")

    # (2) partitions
    for c in cert.claims:
        missing = [pid for pid in c.piece_ids if pid not in pieces]
        if missing:
            fails.append(f"claim {c.name}: unknown pieces {missing}")
            continue
        regs = [pieces[pid].region for pid in c.piece_ids]
        test = [_interior(r) for r in regs] if mode == "mod_boundary" else regs
        for (i, r), (j, s) in itertools.combinations(enumerate(test), 2):
            if not r.intersect(s).is_empty():
                fails.append(f"claim {c.name}: pieces {c.piece_ids[i]} and {c.piece_ids[j]} overlap")
        union = RegionSet([], c.region.dim)
        for r in regs:
            union = union.union(r)
        target = c.region.closure_pieces() if mode == "mod_boundary" else c.region
        if mode == "mod_boundary":
            union = union.closure_pieces()
        if not union.equals(target):
            fails.append(f"claim {c.name}: union of pieces differs from the region")
            continue
        try:
            vol = _proxy_volume(c.region, cert.proxy)
            vs = sum((_proxy_volume(r, cert.proxy) for r in regs), cert.field.zero)
            if vol != vs:
                fails.append(f"claim {c.name}: volumes are not additive ({vs} != {vol})")
            if mode == "exact":
                chi = _proxy_chi(c.region, cert.proxy)
                cs = sum(_proxy_chi(r, cert.proxy) for r in regs)
                if chi != cs:
                    fails.append(f"claim {c.name}: Euler characteristics are not additive ({cs} != {chi})")
        except ValidationError as exc:
            fails.append(f"claim {c.name}: {exc}")
    return Verdict(not fails, fails, len(cert.pairings), len(cert.claims))
