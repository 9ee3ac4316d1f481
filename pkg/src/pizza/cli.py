"""Command-line entry point ``pizza``.

Every subcommand writes one JSON report with the keys ``schema``,
``config_echo``, ``results``, ``verdicts`` and ``timings``.  Exit codes:
0 all verdicts pass, 1 a mathematical violation, 2 usage error or an
input outside the preconditions, 3 a resource cap was hit.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from typing import Optional

from .engine import HypothesisError, InapplicableError, UnsupportedError
from .errors import DomainError, PizzaError, ResourceError
from .field import FieldSpec, embed_cos, make_field, parse_rational

SCHEMA = 1
EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(PizzaError):
    """Malformed command-line input."""


# ---------------------------------------------------------------------------
# parsing

_SURD = re.compile(r"^([+-]?[0-9./]*)\*?sqrt(\d+)(?:/(\d+))?$")


def _sqrt_element(k: int, F: FieldSpec):
    if k == 2:
        return 2 * embed_cos(F, 1, 4)
    if k == 3:
        return 2 * embed_cos(F, 1, 6)
    if k == 5:
        return 4 * embed_cos(F, 1, 5) - 1
    raise UsageError(f"sqrt{k} is not supported (use sqrt2, sqrt3 or sqrt5)")


def parse_number(tok: str, F: FieldSpec):
    """Exact field element from '0.3', '-1/4', 'sqrt2/2' or '3*sqrt3/4'."""
    tok = tok.strip()
    m = _SURD.match(tok)
    try:
        if m:
            coef, k, d = m.groups()
            c = parse_rational(coef) if coef not in ("", "+", "-") else (-1 if coef == "-" else 1)
            x = _sqrt_element(int(k), F) * F(c)
            return x / int(d) if d else x
        return F(parse_rational(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse number {tok!r}") from exc
    except DomainError as exc:
        raise UsageError(f"{tok!r} is not in the field Q(2cos(pi/{F.N})): {exc}") from exc


def parse_vector(text: str, F: FieldSpec) -> tuple:
    return tuple(parse_number(t, F) for t in text.split(","))


def _kv(text: str) -> dict:
    out = {}
    for part in text.split(","):
        if "=" in part:
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
        elif part.strip():
            out.setdefault("_", []).append(part.strip())
    return out


def parse_method(text: str) -> dict:
    """'exact' or 'mc:n=1e7,seed=42'."""
    if text == "exact":
        return {"method": "exact"}
    if text.startswith("mc"):
        kv = _kv(text[3:]) if ":" in text else {}
        try:
            n = int(float(kv.get("n", "1e6")))
            seed = int(kv["seed"])
        except KeyError:
            raise UsageError("mc needs an explicit seed, e.g. mc:n=1e6,seed=1") from None
        except ValueError as exc:
            raise UsageError(f"bad mc parameters in {text!r}") from exc
        if n <= 0:
            raise UsageError("mc sample count must be positive")
        return {"method": "mc", "n": n, "seed": seed}
    raise UsageError(f"unknown method {text!r}")


def parse_shape(text: str, F: FieldSpec, W=None):
    """ball:r=1 | annulus:1,2 | orbit:p=<csv> | box:c=1 as an engine Body."""
    from .engine import Body

    kind, _, rest = text.partition(":")
    kv = _kv(rest)
    if kind == "ball":
        return Body.ball(parse_number(kv.get("r", "1"), F))
    if kind == "annulus":
        vals = kv.get("_", [])
        r1 = kv.get("r1", vals[0] if vals else None)
        r2 = kv.get("r2", vals[1] if len(vals) > 1 else None)
        if r1 is None or r2 is None:
            raise UsageError("annulus needs two radii, e.g. annulus:1,2")
        return Body.annulus(parse_number(r1, F), parse_number(r2, F))
    if kind == "box":
        if W is None:
            raise UsageError("box shapes need an arrangement")
        return Body.box(parse_number(kv.get("c", "1"), F), W.system.ambient_dim, F)
    if kind == "orbit":
        if W is None:
            raise UsageError("orbit shapes need an arrangement")
        p = rest.split("=", 1)[1] if "=" in rest else rest
        return Body.orbit_polytope(parse_vector(p, F), W)
    raise UsageError(f"unknown shape {text!r}")


def fmt(x) -> object:
    """JSON form of an exact number: the exact string and a float."""
    if isinstance(x, (int, float)):
        return x
    if hasattr(x, "is_rational") and x.is_rational():
        return {"exact": str(x.as_rational()), "float": float(x)}
    return {"exact": repr(x), "float": float(x)}


# ---------------------------------------------------------------------------
# subcommands

def _arrangement(spec: str, heavy: bool):
    from .coxeter import ORDER_CAP, enumerate_group
    from .roots import arrangement

    A = arrangement(spec)
    W = enumerate_group(A.positive, cap=ORDER_CAP * (50 if heavy else 1))
    return A, W


def cmd_group(args) -> tuple:
    from .coxeter import chambers_with_signs

    A, W = _arrangement(args.type, args.heavy)
    res = {"type": A.system.type_label, "order": len(W), "reflections": len(A.hyperplanes),
           "has_minus_id": W.has_minus_id(), "rank": A.system.rank}
    if args.chambers:
        res["chambers"] = [{"sign": ch.sign, "separating": len(ch.separating_set),
                            "walls": [[fmt(x) for x in w] for w in ch.walls]}
                           for ch in chambers_with_signs(A, W)]
    return res, {}


def cmd_twostruct(args) -> tuple:
    from .twostruct import enumerate_two_structures

    A, W = _arrangement(args.type, args.heavy)
    S = A.system
    phis = enumerate_two_structures(A.positive, W)
    rows = []
    for phi in phis:
        row = {"type": phi.type_label, "roots": sorted(phi.roots)}
        if args.epsilon:
            row["epsilon"] = phi.epsilon
            row["transporter"] = list(phi.transporter.perm) if phi.transporter is not None else None
        if args.vectors:
            row["positive_roots"] = [[fmt(x) for x in r] for r in phi.positive_vectors(S)]
        rows.append(row)
    return {"type": S.type_label, "count": len(phis), "structures": rows}, {}


def cmd_verify(args) -> tuple:
    from .engine import _is_a1n, a1n_closed_form, pizza_sum

    A, W = _arrangement(args.type, args.heavy)
    S = A.system
    F = S.field
    a = parse_vector(args.a, F)
    if len(a) != S.ambient_dim:
        raise UsageError(f"a has {len(a)} coordinates, the arrangement lives in dimension {S.ambient_dim}")
    K = parse_shape(args.shape, F, W)
    meth = parse_method(args.method)
    res = pizza_sum(A, K, a, valuation=args.valuation, method=meth["method"], n_samples=meth.get("n", 0),
                    seed=meth.get("seed", 0), W=W)
    expected = F.zero
    out = {"type": S.type_label, "method": meth["method"], "valuation": args.valuation}
    if _is_a1n(S) and args.valuation == "volume":
        expected, coef, _ = a1n_closed_form(a, A.positive)
        out["closed_form"] = fmt(expected)
    if meth["method"] == "exact":
        out.update({"value": fmt(res.value), "terms": res.n_terms})
        ok = res.value == expected
    else:
        out.update({"estimate": res.value, "stderr": res.stderr, "samples": res.samples})
        ok = abs(res.value - float(expected)) <= 4 * res.stderr
    return out, {"identity": ok}


def cmd_dissect(args) -> tuple:
    from .certificate import verify_certificate
    from .dihedral import (angle_checks, frederickson_certificate, implied_sum,
                           outer_cancellation_certificate, q_chain_check)

    F = make_field(2 * args.m)
    a = parse_vector(args.a, F)
    if len(a) != 2:
        raise UsageError("a must have two coordinates")
    certs = {}
    if args.kind in ("outer", "both"):
        certs["outer"] = outer_cancellation_certificate(args.m, a)
    if args.kind in ("frederickson", "both"):
        certs["frederickson"] = frederickson_certificate(args.m, a)
    verdicts, res = {}, {"m": args.m, "a": [fmt(x) for x in a]}
    for name, c in certs.items():
        v = verify_certificate(c)
        verdicts[name] = v.ok
        res[name] = {"pieces": len(c.pieces), "pairings": len(c.pairings), "claims": len(c.claims),
                     "failures": v.failures}
    if args.kind == "both":
        s = implied_sum(args.m, a, outer=certs["outer"], fred=certs["frederickson"])
        res["implied_sum"] = {"pieces": fmt(s.pieces_value), "engine": fmt(s.engine_value)}
        verdicts["implied_sum"] = s.ok
    if args.checks:
        rows = angle_checks(args.m, a)
        res["angles"] = [{"i": i, "quad": w, "k": k, "ok": ok} for i, w, k, ok in rows]
        verdicts["angles"] = all(r[3] for r in rows)
        chain = q_chain_check(args.m, a)
        res["q_chain"] = [{"i": i, "ok": ok} for i, ok in chain]
        verdicts["q_chain"] = all(ok for _, ok in chain)
    if args.out:
        bundle = {"schema": SCHEMA, "certificates": [c.to_json() for c in certs.values()]}
        with open(args.out, "w") as fh:
            json.dump(bundle, fh, indent=1, sort_keys=True)
    if args.svg:
        from .svg import certificate_svg

        c = certs.get("frederickson") or certs["outer"]
        with open(args.svg, "w") as fh:
            fh.write(certificate_svg(c, m=args.m))
    return res, verdicts


def _load_certs(path: str) -> list:
    from .certificate import DissectionCertificate

    with open(path) as fh:
        data = json.load(fh)
    items = data["certificates"] if "certificates" in data else [data]
    return [DissectionCertificate.from_json(x) for x in items]


def cmd_cert(args) -> tuple:
    from .certificate import verify_certificate

    try:
        certs = _load_certs(args.file)
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read certificate file: {exc}") from exc
    res, verdicts = {"certificates": []}, {}
    for k, c in enumerate(certs):
        v = verify_certificate(c)
        res["certificates"].append({"kind": c.kind, **v.to_json()})
        verdicts[f"{k}:{c.kind}"] = v.ok
    return res, verdicts


def cmd_shares(args) -> tuple:
    from .coxeter import enumerate_group
    from .dihedral import hirschhorn_shares
    from .roots import arrangement

    F = make_field(2 * args.m)
    a = parse_vector(args.a, F)
    A = arrangement(f"I2({2 * args.m})")
    W = enumerate_group(A.positive)
    K = parse_shape(args.shape, F, W)
    meth = parse_method(args.method)
    if K.kind == "ball" and meth["method"] != "mc":
        raise UsageError("a disc needs --method mc:n=...,seed=...")
    rep = hirschhorn_shares(args.m, args.r, K, a, n_samples=meth.get("n", 10**6), seed=meth.get("seed", 0))
    res = {"m": args.m, "r": args.r, "areas": [fmt(x) if not isinstance(x, float) else float(x) for x in rep.areas],
           "difference": fmt(rep.diff) if rep.diff_stderr is None else float(rep.diff),
           "difference_stderr": rep.diff_stderr, "inner_equal": rep.inner_equal,
           "certificate": {"pieces": len(rep.certificate.pieces), "pairings": len(rep.certificate.pairings),
                           "failures": rep.verdict.failures}}
    if rep.stderr is not None:
        res["stderr"] = [float(x) for x in rep.stderr]
    return res, {"certificate": rep.verdict.ok, "inner": rep.inner_equal, "shares_equal": rep.ok}


def _dims(text: str, F) -> tuple:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise UsageError(f"expected WxH, got {text!r}")
    return parse_number(parts[0], F), parse_number(parts[1], F)


def cmd_bg(args) -> tuple:
    from . import bolyai
    from .certificate import verify_certificate

    F = make_field(1)
    if args.bg == "rect":
        w, h = _dims(args.src, F)
        cert = bolyai.rectangle_retile(w, h, parse_number(args.to_width, F))
        res = {"pieces": len(cert.pairings), "moved": bolyai.moved_pieces(cert),
               "target": [fmt(parse_number(args.to_width, F)), fmt(w * h / parse_number(args.to_width, F))]}
    elif args.bg == "polygon":
        try:
            with open(args.vertices) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read vertices: {exc}") from exc
        verts = [tuple(parse_number(str(x), F) for x in v) for v in data]
        cert = bolyai.polygon_to_rectangle(verts, parse_number(args.width, F))
        res = {"pieces": len(cert.pairings), "area": fmt(cert.params["area"]),
               "height": fmt(cert.params["height"])}
    else:
        return _bg_kz(args)
    v = verify_certificate(cert)
    res["failures"] = v.failures
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(cert.dumps())
    if args.svg:
        from .svg import certificate_svg

        with open(args.svg, "w") as fh:
            fh.write(certificate_svg(cert))
    verdicts = {"certificate": v.ok}
    if args.bg == "rect":
        verdicts["translation_only"] = all(q.isometry.is_translation() for q in cert.pairings)
    return res, verdicts


def _bg_kz(args) -> tuple:
    from .bolyai import Parallelotope, kz_vector

    F = make_field(1)
    try:
        with open(args.items) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read items: {exc}") from exc
    dim = int(data["dim"])

    def items(lst):
        out = []
        for it in lst:
            p = Parallelotope.box([parse_number(str(x), F) for x in it["lows"]],
                                  [parse_number(str(x), F) for x in it["highs"]], bool(it.get("closed", True)), F)
            out.append((int(it.get("sign", 1)), p))
        return out

    groups = {k: kz_vector(items(v), dim) for k, v in data.items() if k != "dim"}
    res = {k: v.to_json() for k, v in sorted(groups.items())}
    verdicts = {}
    names = sorted(groups)
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            res[f"{x}=={y}"] = groups[x] == groups[y]
    return res, verdicts


# ---------------------------------------------------------------------------
# driver

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pizza", description="Exact checks of alternating chamber sums.")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("--no-timings", action="store_true", help="omit timings (byte-identical reruns)")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("group", help="Coxeter group statistics")
    g.add_argument("--type", required=True)
    g.add_argument("--stats", action="store_true")
    g.add_argument("--chambers", action="store_true", help="export chambers with signs")
    g.add_argument("--heavy", action="store_true")

    t = sub.add_parser("twostruct", help="list 2-structures")
    t.add_argument("--type", required=True)
    t.add_argument("--epsilon", action="store_true")
    t.add_argument("--vectors", action="store_true")
    t.add_argument("--heavy", action="store_true")

    v = sub.add_parser("verify", help="evaluate the alternating sum")
    v.add_argument("--type", required=True)
    v.add_argument("--a", required=True)
    v.add_argument("--shape", required=True)
    v.add_argument("--method", default="exact")
    v.add_argument("--valuation", choices=["volume", "chi"], default="volume")
    v.add_argument("--heavy", action="store_true")

    d = sub.add_parser("dissect", help="dihedral dissection certificates")
    d.add_argument("family", choices=["dihedral"])
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--a", required=True)
    d.add_argument("--kind", choices=["outer", "frederickson", "both"], default="both")
    d.add_argument("--checks", action="store_true", help="also run the angle and Q-chain checks")
    d.add_argument("--out")
    d.add_argument("--svg")

    c = sub.add_parser("cert", help="certificate tools")
    c.add_argument("action", choices=["verify"])
    c.add_argument("file")

    s = sub.add_parser("shares", help="compare shares of every m-th sector")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--a", required=True)
    s.add_argument("--shape", default="ball:r=1")
    s.add_argument("--method", default="mc:n=1e6,seed=0")

    b = sub.add_parser("bg", help="translation dissections and box classes")
    bs = b.add_subparsers(dest="bg", required=True)
    br = bs.add_parser("rect")
    br.add_argument("--from", dest="src", required=True)
    br.add_argument("--to-width", required=True)
    br.add_argument("--out")
    br.add_argument("--svg")
    bp = bs.add_parser("polygon")
    bp.add_argument("--vertices", required=True)
    bp.add_argument("--width", default="1")
    bp.add_argument("--out")
    bp.add_argument("--svg")
    bk = bs.add_parser("kz")
    bk.add_argument("--items", required=True)
    return p


COMMANDS = {"group": cmd_group, "twostruct": cmd_twostruct, "verify": cmd_verify, "dissect": cmd_dissect,
            "cert": cmd_cert, "shares": cmd_shares, "bg": cmd_bg}


def run(argv: Optional[list] = None) -> tuple:
    """Parse and execute; returns (exit code, report dict)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), None
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("report", "no_timings")}
    t0 = time.perf_counter()
    report = {"schema": SCHEMA, "config_echo": echo}
    try:
        results, verdicts = COMMANDS[args.cmd](args)
        code = EXIT_OK if all(verdicts.values()) else EXIT_VIOLATION
    except ResourceError as exc:
        results, verdicts, code = {"error": str(exc)}, {}, EXIT_RESOURCE
    except (UsageError, DomainError) as exc:
        results, verdicts, code = {"error": str(exc)}, {}, EXIT_USAGE
    except (HypothesisError, UnsupportedError, InapplicableError) as exc:
        # the input does not meet the preconditions of the check
        results, verdicts, code = {"error": f"{type(exc).__name__}: {exc}"}, {}, EXIT_USAGE
    except PizzaError as exc:
        results, verdicts, code = {"error": f"{type(exc).__name__}: {exc}"}, {}, EXIT_VIOLATION
    report["results"] = results
    report["verdicts"] = verdicts
    if not args.no_timings:
        report["timings"] = {"total_s": round(time.perf_counter() - t0, 3)}
    text = json.dumps(report, indent=1, sort_keys=True, default=str)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code, report


def main(argv: Optional[list] = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
