"""Independent verification of "nf-cert/1" certificates.

Nothing here imports the generator's condition builders. Every obligation
is rebuilt from the raw parameters, the embedded manifest and the ledger,
compared with the stored instance, and evaluated afresh.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Any, Mapping

from .errors import MalformedCertificate, NucleiError
from .handlebody import Handlebody, homology, verify_nucleus
from .intlat import hermite_basis, kernel_basis
from .manifest import from_manifest, sha256_of, to_manifest
from .surgery import knot_surgery, log_transform, strip_corks
from .swadj import KnotSpec, alexander

SCHEMA = "nf-cert/1"
STATUSES = ("proved", "assumed", "unknown", "axiom", "failed")
FAMILY = ("log_family", "knot_family")
COMPOSITE = ("stein_nonstein", "w_plus_exotica")


def _holds(lhs, relation: str, rhs) -> bool:
    if lhs is None or rhs is None:
        return False
    if relation == "==":
        return lhs == rhs
    if relation == "!=":
        return lhs != rhs
    if not isinstance(lhs, int) or not isinstance(rhs, int):
        return False
    return {">": lhs > rhs, ">=": lhs >= rhs, "<": lhs < rhs, "<=": lhs <= rhs}.get(relation, False)


@dataclass(frozen=True)
class CheckResult:
    verdict: str
    failing: tuple[str, ...]
    diffs: tuple[str, ...]

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "failing": list(self.failing), "diffs": list(self.diffs)}


class _Run:
    def __init__(self):
        self.failing: list[str] = []
        self.diffs: list[str] = []
        self.expected: dict[str, tuple[Any, str, Any]] = {}

    def fail(self, oid: str, why: str) -> None:
        if oid not in self.failing:
            self.failing.append(oid)
        self.diffs.append(f"{oid}: {why}")

    def expect(self, oid: str, lhs, relation: str, rhs) -> None:
        self.expected[oid] = (lhs, relation, rhs)


# ---------------------------------------------------------------------------
# Small independent helpers


def _vec(x: Handlebody, chain: Mapping[str, int]) -> list[int]:
    names = [h.name for h in x.two_handles]
    for k in chain:
        if k not in names:
            raise MalformedCertificate(f"chain names unknown handle {k!r}")
    return [int(chain.get(n, 0)) for n in names]


def _lk(x: Handlebody) -> list[list[int]]:
    hs = x.two_handles
    return [[h.framing if i == j else h.linking.get(k.name, 0) for j, k in enumerate(hs)] for i, h in enumerate(hs)]


def _dot(x: Handlebody, a, b) -> int:
    q = _lk(x)
    va, vb = _vec(x, a), _vec(x, b)
    return sum(va[i] * q[i][j] * vb[j] for i in range(len(va)) for j in range(len(vb)))


def _is_cycle(x: Handlebody, chain) -> bool:
    v = _vec(x, chain)
    for g in x.one_handles:
        if sum(c * sum(e for gg, e in h.word if gg == g) for h, c in zip(x.two_handles, v)):
            return False
    return True


def _spans_h2(x: Handlebody, chains) -> bool:
    n = len(x.two_handles)
    vecs = [tuple(_vec(x, c)) for c in chains]
    ker = kernel_basis(x.run_over_matrix())
    return len(vecs) == len(ker) and hermite_basis(vecs, n) == hermite_basis(ker, n)


def _eff(bound: int, square: int) -> int:
    return max(bound, 1) if square < 0 else bound


def _torus_delta(k: int) -> list[list[int]]:
    return [[e, (-1) ** (k - e)] for e in range(-k, k + 1)]


def _expand(classes, direction, exps_coefs, scale: int) -> list:
    acc: dict[tuple, int] = {}
    for vec, c in classes:
        for e, a in exps_coefs:
            w = tuple(v + scale * e * t for v, t in zip(vec, direction))
            acc[w] = acc.get(w, 0) + c * a
    return [[list(v), c] for v, c in sorted(acc.items()) if c]


# ---------------------------------------------------------------------------
# Family certificates


def _check_family(doc: dict, run: _Run) -> None:
    x = _load_manifest(doc.get("manifest"), doc.get("manifest_sha256"), "manifest", run)
    if x is None:
        return
    params = doc["parameters"]
    key = params.get("marker")
    if key not in x.markers:
        raise MalformedCertificate(f"marker {key!r} is not in the manifest")
    mk = x.markers[key]
    ds = doc["data_set"]
    strengthened = bool(doc.get("strengthened"))

    # data set
    tv = _vec(x, mk.class_T)
    d = 0
    for c in tv:
        d = gcd(d, c)
    t_hat = {h: v // d for h, v in mk.class_T.items() if v} if d else {}
    s_chain = {h: v for h, v in mk.class_S.items() if v}
    s = _dot(x, s_chain, s_chain)
    comp = ds.get("complement", [])
    labels = ds.get("u_labels", [])
    if len(labels) != len(comp):
        raise MalformedCertificate("complement and labels differ in length")
    u_sq = [_dot(x, u, u) for u in comp]
    rep = verify_nucleus(x, mk)
    if rep.verdict == "not_nucleus":
        run.fail("data_set.nucleus", "the marked part is not a nucleus")
    for name, got, want in (
        ("d_T", ds.get("d_T"), d),
        ("s", ds.get("s"), s),
        ("S", ds.get("S"), dict(sorted(s_chain.items()))),
        ("T_hat", ds.get("T_hat"), dict(sorted(t_hat.items()))),
        ("u_squares", ds.get("u_squares"), u_sq),
        ("parity", ds.get("parity"), "even" if s % 2 == 0 else "odd"),
    ):
        if got != want:
            run.fail(f"data_set.{name}", f"stored {got!r}, recomputed {want!r}")
    if _dot(x, s_chain, t_hat) != 1:
        run.fail("data_set.S.T_hat", "S.T^ is not 1")
    for i, u in enumerate(comp, 1):
        if not _is_cycle(x, u) or _dot(x, u, s_chain) or _dot(x, u, t_hat):
            run.fail(f"data_set.complement[{i}]", "not a cycle orthogonal to S and T^")
    basis = [s_chain, t_hat] + comp
    if not _spans_h2(x, basis):
        run.fail("data_set.basis", "(S, T^, u) is not a basis of H2")
    q = [[_dot(x, a, b) for b in basis] for a in basis]
    if ds.get("Q") != q:
        run.fail("data_set.Q", "intersection matrix differs")

    # ledger
    ledger = doc.get("ledger", {})
    w_plus = {c.target for c in x.corks if c.sign == "+"}
    for label, e in ledger.items():
        b, prov = e.get("bound"), e.get("provenance")
        if not isinstance(b, int) or b < 0:
            run.fail(f"ledger.bound[{label}]", f"bad bound {b!r}")
        if prov == "seifert_genus":
            if label == "S_1":
                hn = next(iter(s_chain)) if len(s_chain) == 1 else None
            elif label.startswith("u:"):
                hn = label[2:]
            else:
                hn = None
            ok = hn is not None and x.has_handle(hn) and x.handle(hn).seifert_genus == b and hn not in w_plus
            if not ok:
                run.fail(f"ledger.provenance[{label}]", "Seifert genus provenance does not match the manifest")

    def g_of(label: str, square: int):
        e = ledger.get(label)
        return None if e is None else _eff(int(e["bound"]), square)

    g_u = []
    for lab, sq in zip(labels, u_sq):
        g = g_of(lab, sq)
        if g is None:
            run.fail(f"ledger[{lab}]", "complement class without a bound")
            g = 0
        g_u.append(g)
    if ds.get("g_u") != g_u:
        run.fail("data_set.g_u", f"stored {ds.get('g_u')!r}, recomputed {g_u!r}")

    # sequence conditions
    if doc["construction"] == "log_family":
        ps = params.get("p")
        if not isinstance(ps, list) or not ps or not all(isinstance(p, int) for p in ps):
            raise MalformedCertificate("log family needs a list of integers p")
        coeffs = [d * (p - 1) for p in ps]
        prev_labels = [f"S_{p}" for p in ps[:-1]]
        run.expect("log.p1", ps[0], "==", 1)
        for n in range(2, len(ps) + 1):
            p, prev = ps[n - 1], ps[n - 2]
            c = coeffs[n - 1]
            run.expect(f"log.i[n={n}]", p, ">", prev)
            if n == 2:
                for i, (sq, g) in enumerate(zip(u_sq, g_u), 1):
                    run.expect(f"log.ii[n=2,i={i}]", c + sq, ">", 2 * g - 2)
                    if strengthened:
                        run.expect(f"log.vi[n=2,i={i}]", c - sq, ">", 2 * g - 2)
            gp = g_of(f"S_{prev}", s)
            if gp is None:
                run.expect(f"ledger[S_{prev}]", 0, "==", 1)
            else:
                run.expect(f"log.iii[n={n}]", c + s, ">", 2 * gp - 2)
                if strengthened:
                    run.expect(f"log.vii[n={n}]", c - s, ">", 2 * gp - 2)
            run.expect(f"log.iv[n={n}]", gcd(p, d), "==", 1)
            if s % 2 == 0 and d % 2 == 1:
                run.expect(f"log.v[n={n}]", p % 2, "==", 1)
        seq = ps
    else:
        try:
            knots = [KnotSpec.from_dict(k) for k in params["knots"]]
        except (KeyError, TypeError) as e:
            raise MalformedCertificate(f"bad knot parameters: {e}") from None
        if d != 1:
            run.fail("knot.divisor", f"d_T = {d}")
        deltas = [alexander(k.seifert_matrix()) for k in knots]
        if params.get("alexander") != [dl.to_pairs() for dl in deltas]:
            run.fail("knot.alexander.stored", "stored Alexander polynomials differ")
        degs = [dl.max_exp() for dl in deltas]
        coeffs = [2 * g for g in degs]
        prev_labels = ["S_1" if dl.terms == ((0, 1),) else f"S_K:{k.label}" for k, dl in zip(knots[:-1], deltas[:-1])]
        run.expect("knot.k1", deltas[0].to_pairs(), "==", [[0, 1]])
        for n in range(2, len(knots) + 1):
            c = coeffs[n - 1]
            run.expect(f"knot.i[n={n}]", degs[n - 1], ">", degs[n - 2])
            if n == 2:
                for i, (sq, g) in enumerate(zip(u_sq, g_u), 1):
                    run.expect(f"knot.ii[n=2,i={i}]", c + sq, ">", 2 * g - 2)
                    if strengthened:
                        run.expect(f"knot.iv[n=2,i={i}]", c - sq, ">", 2 * g - 2)
            gp = g_of(prev_labels[n - 2], s)
            if gp is None:
                run.expect(f"ledger[{prev_labels[n - 2]}]", 0, "==", 1)
            else:
                run.expect(f"knot.iii[n={n}]", c + s, ">", 2 * gp - 2)
                if strengthened:
                    run.expect(f"knot.v[n={n}]", c - s, ">", 2 * gp - 2)
            if knots[n - 1].family == "torus":
                run.expect(f"knot.alexander[n={n}]", deltas[n - 1].to_pairs(), "==", _torus_delta(knots[n - 1].param))
        seq = knots

    # separation chains
    chains = []
    for n in range(2, len(coeffs) + 1):
        c = coeffs[n - 1]
        ids = []
        gp = g_of(prev_labels[n - 2], s)
        if gp is None:
            ids.append(f"ledger[{prev_labels[n - 2]}]")
            run.expect(ids[-1], 0, "==", 1)
        else:
            ids.append(f"sep.v0[n={n}]")
            run.expect(ids[-1], c + s, ">", 2 * gp - 2)
            if strengthened:
                ids.append(f"sep.rev.v0[n={n}]")
                run.expect(ids[-1], c - s, ">", 2 * gp - 2)
        ids.append(f"sep.v1[n={n}]")
        run.expect(ids[-1], c, ">", 0)
        for i, (sq, g) in enumerate(zip(u_sq, g_u), 1):
            ids.append(f"sep.u[n={n},i={i}]")
            run.expect(ids[-1], c + sq, ">", 2 * g - 2)
            if strengthened:
                ids.append(f"sep.rev.u[n={n},i={i}]")
                run.expect(ids[-1], c - sq, ">", 2 * g - 2)
        chains.append((n, ids))
    stored_chains = doc.get("separation", [])
    if len(stored_chains) != len(chains):
        run.fail("separation", "wrong number of adjacent pairs")
    for (n, ids), sc in zip(chains, stored_chains):
        got_ids = [st.get("obligation") for st in sc.get("steps", [])]
        if got_ids != ids:
            run.fail(f"separation[n={n}]", "chain steps differ")
        want = all(_holds(*run.expected[i]) for i in ids)
        if sc.get("contradiction") != want:
            run.fail(f"separation[n={n}]", f"contradiction flag {sc.get('contradiction')!r}, recomputed {want!r}")

    # members
    base = homology(x).ledger()
    basics = ds.get("basics", {})
    classes = [(tuple(v), c) for v, c in basics.get("classes", [])]
    rank = basics.get("rank")
    if rank != len(comp) + 2:
        run.fail("data_set.basics", "basic classes have the wrong rank")
    tdual = [d] + [0] * (len(comp) + 1)
    members = {m.get("index"): m for m in doc.get("members", [])}
    for n, item in enumerate(seq, 1):
        try:
            if doc["construction"] == "log_family":
                y = log_transform(x, key, item).manifold
                exps = [(-(item - 1) + 2 * i, 1) for i in range(item)] if item >= 1 else []
                want_basics = _expand(classes, tdual, exps, 1)
            else:
                y = knot_surgery(x, key, item).manifold
                want_basics = _expand(classes, tdual, deltas[n - 1].terms, 2)
        except (NucleiError, ValueError) as e:
            run.expect(f"member.construct[n={n}]", 0, "==", 1)
            run.diffs.append(f"member {n}: {e}")
            continue
        rec = members.get(n)
        if rec is None:
            run.fail(f"member[n={n}]", "missing member record")
            continue
        if rec.get("manifest_sha256") != sha256_of(to_manifest(y)):
            run.fail(f"member.manifest[n={n}]", "member manifest hash differs")
        yrep = homology(y)
        run.expect(f"member.ledger[n={n}]", yrep.ledger(), "==", base)
        mb = rec.get("basis")
        if mb is None:
            run.expect(f"member.basis[n={n}]", 0, "==", 1)
            run.expect(f"member.form[n={n}]", None, "==", q)
        else:
            ok = all(_is_cycle(y, c) for c in mb) and _spans_h2(y, mb)
            run.expect(f"member.basis[n={n}]", int(ok), "==", 1)
            run.expect(f"member.form[n={n}]", [[_dot(y, a, b) for b in mb] for a in mb], "==", q)
        if rec.get("basic_classes", {}).get("classes") != want_basics:
            run.fail(f"member.basics[n={n}]", "transformed basic classes differ")
        run.expect(f"member.nonempty[n={n}]", len(want_basics), ">", 0)

    rq = doc.get("rel_genus_query", {})
    want_q = {"index": ["S", "T_hat"] + list(labels), "lambda0": 0, "Q": q, "d": [1, d] + [1] * len(comp), "g": [1] + g_u}
    if rq != want_q:
        run.fail("rel_genus_query", "query differs from the recomputed (Q, d, g)")


# ---------------------------------------------------------------------------
# Composite certificates


def _load_manifest(man, sha, tag: str, run: _Run):
    if not isinstance(man, dict):
        raise MalformedCertificate(f"{tag}: missing manifest")
    if sha is not None and sha != sha256_of(man):
        run.fail(f"{tag}.sha256", "content hash mismatch")
    try:
        return from_manifest(man)
    except NucleiError as e:
        run.fail(f"{tag}.parse", str(e))
        return None


def _check_composite(doc: dict, run: _Run) -> None:
    x = _load_manifest(doc.get("manifest"), doc.get("manifest_sha256"), "manifest", run)
    if x is None:
        return
    base = homology(x).ledger()
    loaded: dict[str, Handlebody] = {}
    for e in doc.get("members", []):
        name = e.get("name")
        y = _load_manifest(e.get("manifest"), e.get("manifest_sha256"), f"member[{name}]", run)
        if y is None:
            continue
        loaded[name] = y
        if e.get("role") == "input":
            if to_manifest(y)["two_handles"] != to_manifest(x)["two_handles"]:
                run.fail("member[X]", "input member differs from the certificate manifest")
            continue
        run.expect(f"ledger[{name}]", homology(y).ledger(), "==", base)
        if e.get("role") == "stein":
            for h in y.two_handles:
                tb = None if h.legendrian is None else h.legendrian.tb - 1
                run.expect(f"stein[{name}].{h.name}", h.framing, "==", tb)
    if doc["construction"] == "stein_nonstein":
        x0 = loaded.get("X_0")
        if x0 is None:
            run.fail("member[X_0]", "missing")
        else:
            stripped = strip_corks(x0, [c.id for c in x0.corks])
            run.expect("strip[X_0]", to_manifest(stripped)["two_handles"], "==", to_manifest(x)["two_handles"])
        params = doc.get("parameters", {})
        m = params.get("m")
        recs = {r.get("p"): r for r in doc.get("obstructions", [])}
        for p in params.get("tail", []):
            qv = p - 1
            run.expect(f"nonstein[p={p}]", 2 * qv * m, ">", 4)
            bound = qv * m + 2
            free = not any(abs(t + qv * m) <= 2 and abs(t - qv * m) <= 2 for t in range(-bound, bound + 1))
            r = recs.get(p)
            if r is None or r.get("obstructed") != (free and 2 * qv * m > 4 and p >= 2 and m >= 3):
                run.fail(f"obstruction[p={p}]", "obstruction record missing or inconsistent")
        nested = doc.get("nested", [])
        fam = nested[0] if nested else None
        if fam is None or fam.get("parameters", {}).get("p", [None])[1:] != params.get("tail"):
            run.fail("family.tail", "nested family does not cover the tail")
    for i, sub in enumerate(doc.get("nested", [])):
        r = check_certificate(sub)
        for f in r.failing:
            run.fail(f"nested[{i}]/{f}", "nested certificate")
        run.diffs.extend(f"nested[{i}]/{dd}" for dd in r.diffs if not dd.startswith(tuple(r.failing)))


# ---------------------------------------------------------------------------


def check_certificate(doc) -> CheckResult:
    """Re-derive and re-evaluate a certificate; accept only if everything agrees."""
    if hasattr(doc, "as_dict"):
        doc = doc.as_dict()
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise MalformedCertificate(f"expected schema {SCHEMA!r}")
    for k in ("construction", "parameters", "obligations", "assumptions", "manifest"):
        if k not in doc:
            raise MalformedCertificate(f"missing field {k!r}")
    run = _Run()
    try:
        if doc["construction"] in FAMILY:
            _check_family(doc, run)
        elif doc["construction"] in COMPOSITE:
            _check_composite(doc, run)
        else:
            raise MalformedCertificate(f"unknown construction {doc['construction']!r}")
    except (KeyError, TypeError, AttributeError) as e:
        raise MalformedCertificate(f"malformed certificate: {e!r}") from None

    stored = {}
    for o in doc["obligations"]:
        if not isinstance(o, dict) or "id" not in o:
            raise MalformedCertificate("obligation without id")
        stored[o["id"]] = o
    for oid, o in stored.items():
        now = _holds(o.get("lhs"), o.get("relation"), o.get("rhs"))
        if o.get("holds") != now:
            run.fail(oid, f"stored holds={o.get('holds')!r} but the values give {now!r}")
        if oid not in run.expected:
            run.fail(oid, "obligation not derivable from the parameters")
    for oid, (lhs, rel, rhs) in run.expected.items():
        o = stored.get(oid)
        if o is None:
            run.fail(oid, "required obligation missing")
            continue
        if (o.get("lhs"), o.get("relation"), o.get("rhs")) != (lhs, rel, rhs):
            run.fail(oid, f"stored {o.get('lhs')!r} {o.get('relation')} {o.get('rhs')!r}, recomputed {lhs!r} {rel} {rhs!r}")
        if not _holds(lhs, rel, rhs):
            run.fail(oid, f"{lhs!r} {rel} {rhs!r} is false")

    for a in doc["assumptions"]:
        st = a.get("status") if isinstance(a, dict) else None
        if st not in STATUSES:
            raise MalformedCertificate(f"assumption with status {st!r}")
        if st == "failed":
            run.fail(f"assumption[{a.get('id')}]", "assumption marked failed")

    verdict = "reject" if run.failing else "accept"
    if doc.get("verdict") not in (None, verdict):
        run.diffs.append(f"verdict: stored {doc.get('verdict')!r}, recomputed {verdict!r}")
        verdict = "reject"
    return CheckResult(verdict, tuple(run.failing), tuple(run.diffs))
