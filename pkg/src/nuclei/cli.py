"""Command-line front end.

Exit codes: 0 success or accept, 1 reject or no obstruction, 2 usage or
parse error, 3 a named precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import exotica as ex
from .checker import check_certificate
from .errors import MalformedCertificate, MalformedDiagram, NucleiError
from .handlebody import boundary_sum, cusp_neighborhood, gompf_nucleus, homology, verify_nucleus
from .legendrian import stein_check, steinify
from .manifest import canonical_json, from_manifest, to_manifest
from .surgery import cork_twist, knot_surgery, log_transform, strip_corks, w_modify
from .swadj import KnotSpec


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not JSON: {e}") from None


def _load(path: str):
    return from_manifest(_read_json(path))


def _ledger(path: str | None):
    if path is None:
        return None
    return ex.GenusLedger.from_json(_read_json(path))


def _emit(doc, out: str | None) -> None:
    text = canonical_json(doc) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_manifest(x, out):
    _emit(to_manifest(x), out)


def _report(args, obj: dict, lines: Sequence[str]) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(canonical_json(obj) + "\n")
    else:
        for ln in lines:
            print(ln)


# ---------------------------------------------------------------------------
# Verbs


def cmd_build(args) -> int:
    if args.kind == "gompf":
        if args.n is None:
            raise UsageError("build gompf needs --n")
        x = gompf_nucleus(args.n)
    elif args.kind == "cusp":
        x = cusp_neighborhood()
    else:
        if len(args.inputs) < 2:
            raise UsageError("build sum needs two or more manifests")
        x = _load(args.inputs[0])
        for p in args.inputs[1:]:
            x = boundary_sum(x, _load(p))
    _emit_manifest(x, args.out)
    return 0


def cmd_homology(args) -> int:
    rep = homology(_load(args.manifest))
    f = rep.form
    lines = [
        f"H1 invariant factors: {list(rep.H1)}",
        f"H2 = Z^{rep.H2_free_rank}",
        f"form: {f.parity} {'unimodular' if f.unimodular else 'non-unimodular'} {f.definiteness}, "
        f"signature {f.signature}, determinant {f.determinant}",
        f"form matrix: {rep.form_matrix.tolist()}",
        f"boundary H1 invariant factors: {list(rep.boundary_H1)}",
    ]
    _report(args, rep.as_dict(), lines)
    return 0


def cmd_verify(args) -> int:
    x = _load(args.manifest)
    if args.marker not in x.markers:
        raise UsageError(f"no marker {args.marker!r}")
    rep = verify_nucleus(x, x.markers[args.marker])
    lines = [f"({k}) {c.status}: {c.detail}" for k, c in rep.conditions.items()]
    lines.append(f"verdict: {rep.verdict}")
    _report(args, rep.as_dict(), lines)
    return 1 if rep.verdict == "not_nucleus" else 0


def cmd_log(args) -> int:
    res = log_transform(_load(args.manifest), args.marker, args.p)
    _emit_manifest(res.manifold, args.out)
    if args.out:
        print(f"s' = {res.s_prime}, parity {res.parity}")
    return 0


def cmd_knot(args) -> int:
    res = knot_surgery(_load(args.manifest), args.marker, KnotSpec.parse(args.knot))
    _emit_manifest(res.manifold, args.out)
    if args.out:
        print(f"Alexander polynomial: {res.multiplier}")
    return 0


def cmd_wmod(args) -> int:
    _emit_manifest(w_modify(_load(args.manifest), args.target, args.sign, args.p), args.out)
    return 0


def cmd_twist(args) -> int:
    _emit_manifest(cork_twist(_load(args.manifest), args.id), args.out)
    return 0


def cmd_strip(args) -> int:
    x = _load(args.manifest)
    ids = [c.id for c in x.corks] if args.all else args.ids
    _emit_manifest(strip_corks(x, ids), args.out)
    return 0


def cmd_steinify(args) -> int:
    _emit_manifest(steinify(_load(args.manifest)), args.out)
    return 0


def cmd_stein_check(args) -> int:
    bad = stein_check(_load(args.manifest))
    doc = {"stein": not bad, "violations": [{"handle": v.handle, "framing": v.framing, "tb": v.tb, "required_p": v.required_p} for v in bad]}
    lines = ["Stein: every framing equals tb - 1"] if not bad else [
        f"{v.handle}: framing {v.framing}, tb {v.tb}" + (f", needs W+({v.required_p})" if v.framing > v.tb - 1 else ", needs zig-zags")
        for v in bad
    ]
    _report(args, doc, lines)
    return 0 if not bad else 1


def _cert_out(cert, out) -> int:
    doc = cert.as_dict()
    _emit(doc, out)
    if out:
        print(f"verdict: {doc['verdict']}")
        for oid in cert.failing:
            print(f"failing: {oid}")
    return 0 if doc["verdict"] == "accept" else 1


def cmd_gen_family(args) -> int:
    x = _load(args.manifest)
    led = _ledger(args.ledger)
    ds = ex.build_data_set(x, args.marker, ledger=led)
    if args.kind == "log":
        seq = ex.gen_p_sequence(ds, args.n, args.strengthened, ledger=led)
    else:
        seq = ex.gen_knot_sequence(ds, args.n, args.strengthened, ledger=led)
    return _cert_out(ex.certify_family(ds, seq.values, args.kind, args.strengthened, ledger=led), args.out)


def cmd_certify(args) -> int:
    x = _load(args.manifest)
    led = _ledger(args.ledger)
    ds = ex.build_data_set(x, args.marker, ledger=led)
    items = [s.strip() for s in args.sequence.split(";" if args.kind == "knot" else ",") if s.strip()]
    if args.kind == "log":
        try:
            seq = [int(s) for s in items]
        except ValueError:
            raise UsageError("--sequence must be comma-separated integers") from None
    else:
        seq = [KnotSpec.parse(s) for s in items]
    return _cert_out(ex.certify_family(ds, seq, args.kind, args.strengthened, ledger=led), args.out)


def cmd_check(args) -> int:
    res = check_certificate(_read_json(args.certificate))
    _report(args, res.as_dict(), [f"verdict: {res.verdict}"] + [f"failing: {f}" for f in res.failing] + [f"diff: {d}" for d in res.diffs])
    return 0 if res.accepted else 1


def cmd_obstruct(args) -> int:
    if (args.p is None) == (args.knot is None):
        raise UsageError("give exactly one of --p and --knot")
    op = ("log", args.p) if args.p is not None else ("knot", KnotSpec.parse(args.knot))
    rec = ex.nonstein_obstruction(_load(args.manifest), args.marker, op, args.m, strict=args.strict)
    lines = [f"obstructed: {rec.obstructed}", f"reason: {rec.reason}"]
    if rec.inequality:
        lines.append(f"2qm = {rec.inequality['lhs']} > 4")
    lines.append(f"both orientations: {rec.both_orientations}")
    _report(args, rec.as_dict(), lines)
    return 0 if rec.obstructed else 1


def _parse_slide(s: str) -> tuple[str, str, int]:
    parts = s.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"slide {s!r} must be FROM:OVER[:SIGN]")
    sign = int(parts[2]) if len(parts) == 3 else 1
    return parts[0], parts[1], sign


def cmd_pipeline(args) -> int:
    x = _load(args.manifest)
    led = _ledger(args.ledger)
    if args.kind == "stein-nonstein":
        slides = [_parse_slide(s) for s in args.slide]
        res = ex.stein_nonstein_pipeline(x, args.marker, args.n, ledger=led, slides=slides, tail=args.tail, m_val=args.m)
    else:
        res = ex.w_plus_exotica_pipeline(x, args.marker, ledger=led, n=args.n)
    return _cert_out(res.certificate, args.out)


# ---------------------------------------------------------------------------


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nuclei", description="Handlebody calculus and exotica certificates.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_, manifest=True, marker=False, out=False, json_=False):
        p = sub.add_parser(name, help=help_)
        if manifest:
            p.add_argument("manifest")
        if marker:
            p.add_argument("--marker", default="N")
        if out:
            p.add_argument("--out")
        if json_:
            p.add_argument("--json", action="store_true", help="print the report as JSON")
        p.set_defaults(fn=fn)
        return p

    p = verb("build", cmd_build, "build a manifest", manifest=False, out=True)
    p.add_argument("kind", choices=["gompf", "cusp", "sum"])
    p.add_argument("inputs", nargs="*")
    p.add_argument("--n", type=int)
    verb("homology", cmd_homology, "homology report", json_=True)
    verb("verify-nucleus", cmd_verify, "check the nucleus conditions", marker=True, json_=True)
    p = verb("log-transform", cmd_log, "p-log transform", marker=True, out=True)
    p.add_argument("--p", type=int, required=True)
    p = verb("knot-surgery", cmd_knot, "knot surgery", marker=True, out=True)
    p.add_argument("--knot", required=True)
    p = verb("w-modify", cmd_wmod, "W+/W- modification", out=True)
    p.add_argument("--target", required=True)
    p.add_argument("--sign", choices=["+", "-"], required=True)
    p.add_argument("--p", type=int, required=True)
    p = verb("cork-twist", cmd_twist, "twist a cork", out=True)
    p.add_argument("--id", required=True)
    p = verb("strip", cmd_strip, "remove corks", out=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--ids", nargs="+")
    g.add_argument("--all", action="store_true")
    verb("steinify", cmd_steinify, "add zig-zags", out=True)
    verb("stein-check", cmd_stein_check, "check the Stein condition", json_=True)
    p = verb("gen-family", cmd_gen_family, "generate and certify a family", marker=True, out=True)
    p.add_argument("--kind", choices=["log", "knot"], default="log")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ledger")
    p.add_argument("--strengthened", action="store_true")
    p = verb("certify", cmd_certify, "certify a given sequence", marker=True, out=True)
    p.add_argument("--kind", choices=["log", "knot"], default="log")
    p.add_argument("--sequence", required=True, help="1,5,13 or unknot;trefoil")
    p.add_argument("--ledger")
    p.add_argument("--strengthened", action="store_true")
    p = verb("check-cert", cmd_check, "verify a certificate", manifest=False, json_=True)
    p.add_argument("certificate")
    p = verb("obstruct-stein", cmd_obstruct, "non-Stein obstruction", marker=True, json_=True)
    p.add_argument("--p", type=int)
    p.add_argument("--knot")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--strict", action="store_true")
    p = verb("pipeline", cmd_pipeline, "Stein/non-Stein or W+ pipeline", marker=True, out=True)
    p.add_argument("--kind", choices=["stein-nonstein", "w-plus"], default="stein-nonstein")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--tail", type=int, default=2)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--ledger")
    p.add_argument("--slide", action="append", default=[], help="FROM:OVER[:SIGN]")
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    ap = parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (MalformedDiagram, MalformedCertificate) as e:
        print(f"parse error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except NucleiError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())
