"""Data sets, parameter sequences, separation certificates and the
Stein / non-Stein pipelines.

Genus values are never computed. They come from a ledger of upper bounds
(declared Seifert genera of attaching knots, explicit declarations, or a
registered provider), and every sequence condition is emitted as a closed
integer obligation so that an independent checker can re-evaluate it.
"""

from __future__ import annotations

import copy
import json
import operator
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    BadParameter,
    DivisorNotOne,
    HypothesisUnmet,
    InconsistentMarker,
    LedgerIncomplete,
    MalformedCertificate,
    MissingGenusData,
    NotGoodHandlebody,
    NucleusFailed,
    ObligationFailure,
    SteinificationFailed,
    TorsionClass,
)
from .handlebody import (
    Handlebody,
    NucleusReport,
    homology,
    intersect,
    is_cycle,
    verify_nucleus,
)
from .intlat import IntMatrix, bilinear, gram, hermite_basis, kernel_basis
from .legendrian import stein_check, steinify
from .manifest import sha256_of, to_manifest
from .surgery import cork_twist, knot_surgery, log_transform, resolve_marker, slide, strip_corks, w_modify
from .swadj import BasicClassSet, KnotSpec, sw_knot_surgery, sw_log_transform

CERT_SCHEMA = "nf-cert/1"
LEDGER_SCHEMA = "nf-ledger/1"
PROVENANCES = ("seifert_genus", "declared", "derived_policy")
ASSUMPTION_STATUSES = ("proved", "assumed", "unknown", "axiom", "failed")

_RELATIONS: dict[str, Callable] = {
    ">": operator.gt,
    ">=": operator.ge,
    "<": operator.lt,
    "<=": operator.le,
    "==": operator.eq,
    "!=": operator.ne,
}


# ---------------------------------------------------------------------------
# Genus ledger


@dataclass(frozen=True)
class GenusBound:
    bound: int
    provenance: str

    def __post_init__(self):
        if not isinstance(self.bound, int) or self.bound < 0:
            raise BadParameter(f"genus bound must be a non-negative integer, got {self.bound!r}")
        if self.provenance not in PROVENANCES:
            raise BadParameter(f"unknown provenance {self.provenance!r}")


@dataclass
class GenusLedger:
    """Upper bounds for the genus of labelled classes.

    Labels: ``S_<p>`` for the sphere class of the p-log transform,
    ``S_K:<knot>`` for knot surgery, ``u:<handle>`` for a complement class
    carried by a single handle, ``u<i>`` for other complement classes.
    A provider, if registered, is consulted for labels not declared.
    """

    entries: dict[str, GenusBound] = field(default_factory=dict)
    provider: Callable[[str], int | None] | None = None

    @classmethod
    def from_bounds(cls, bounds: Mapping[str, int], provenance: str = "declared") -> GenusLedger:
        return cls({str(k): GenusBound(int(v), provenance) for k, v in bounds.items()})

    @classmethod
    def from_json(cls, doc) -> GenusLedger:
        if isinstance(doc, str):
            doc = json.loads(doc)
        if not isinstance(doc, dict) or doc.get("schema") != LEDGER_SCHEMA:
            raise BadParameter(f"expected a ledger with schema {LEDGER_SCHEMA!r}")
        return cls.from_bounds(doc.get("bounds", {}))

    def as_json(self) -> dict:
        return {"schema": LEDGER_SCHEMA, "bounds": {k: v.bound for k, v in sorted(self.entries.items())}}

    def declare(self, label: str, bound: int, provenance: str = "declared") -> None:
        self.entries[label] = GenusBound(bound, provenance)

    def get(self, label: str) -> GenusBound | None:
        if label in self.entries:
            return self.entries[label]
        if self.provider is not None:
            v = self.provider(label)
            if v is not None:
                self.entries[label] = GenusBound(int(v), "derived_policy")
                return self.entries[label]
        return None

    def require(self, label: str) -> GenusBound:
        gb = self.get(label)
        if gb is None:
            raise LedgerIncomplete(label)
        return gb

    def merged(self, other: GenusLedger | Mapping[str, GenusBound] | None) -> GenusLedger:
        """Union keeping the smaller bound on overlap (both are valid upper bounds)."""
        out = dict(self.entries)
        items = other.entries if isinstance(other, GenusLedger) else (other or {})
        for k, v in items.items():
            if k not in out or v.bound < out[k].bound:
                out[k] = v
        prov = self.provider or (other.provider if isinstance(other, GenusLedger) else None)
        return GenusLedger(out, prov)


def _as_ledger(ledger) -> GenusLedger:
    if ledger is None:
        return GenusLedger()
    if isinstance(ledger, GenusLedger):
        return ledger
    if isinstance(ledger, Mapping) and ledger.get("schema") == LEDGER_SCHEMA:
        return GenusLedger.from_json(ledger)
    return GenusLedger.from_bounds(ledger)


def effective_genus(bound: int, square: int) -> int:
    """max{g, 1} for classes of negative square."""
    return max(bound, 1) if square < 0 else bound


def sphere_label(p: int) -> str:
    return f"S_{p}"


def knot_label(k: KnotSpec) -> str:
    return "S_1" if k.alexander.terms == ((0, 1),) else f"S_K:{k.label}"


# ---------------------------------------------------------------------------
# Obligations


@dataclass(frozen=True)
class Obligation:
    id: str
    condition: str
    terms: Mapping[str, object]
    lhs: object
    relation: str
    rhs: object
    holds: bool

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "condition": self.condition,
            "terms": dict(self.terms),
            "lhs": self.lhs,
            "relation": self.relation,
            "rhs": self.rhs,
            "holds": self.holds,
        }


def obligation(oid: str, condition: str, terms: Mapping, lhs, relation: str, rhs) -> Obligation:
    holds = lhs is not None and rhs is not None and bool(_RELATIONS[relation](lhs, rhs))
    return Obligation(oid, condition, dict(terms), lhs, relation, rhs, holds)


def _missing(label: str) -> Obligation:
    return obligation(f"ledger[{label}]", "ledger", {"label": label}, 0, "==", 1)


# ---------------------------------------------------------------------------
# Data set


@dataclass(frozen=True)
class DataSet:
    marker_key: str
    d_T: int
    s: int
    S: Mapping[str, int]
    T_hat: Mapping[str, int]
    complement: tuple[Mapping[str, int], ...]
    u_labels: tuple[str, ...]
    u_squares: tuple[int, ...]
    g_u: tuple[int, ...]
    Q: IntMatrix
    genus: Mapping[str, GenusBound]
    basics: BasicClassSet
    simple_type: bool
    assumptions: tuple[Mapping[str, str], ...]
    parity: str
    nucleus: NucleusReport = field(compare=False, default=None)
    x: Handlebody = field(compare=False, default=None, repr=False)

    @property
    def k(self) -> int:
        return len(self.complement)

    def t_dual(self) -> tuple[int, ...]:
        """PD of the torus class in coordinates dual to (S, T^, u_1..u_k)."""
        return (self.d_T,) + (0,) * (self.k + 1)

    def as_dict(self) -> dict:
        return {
            "marker": self.marker_key,
            "d_T": self.d_T,
            "s": self.s,
            "S": dict(sorted(self.S.items())),
            "T_hat": dict(sorted(self.T_hat.items())),
            "complement": [dict(sorted(u.items())) for u in self.complement],
            "u_labels": list(self.u_labels),
            "u_squares": list(self.u_squares),
            "g_u": list(self.g_u),
            "Q": self.Q.tolist(),
            "basics": self.basics.as_dict(),
            "simple_type": self.simple_type,
            "parity": self.parity,
        }


def _chain(x: Handlebody, v: Sequence[int]) -> dict[str, int]:
    return {h.name: c for h, c in zip(x.two_handles, v) if c}


def _w_plus_targets(x: Handlebody) -> set[str]:
    return {c.target for c in x.corks if c.sign == "+"}


def _seifert_bound(x: Handlebody, name: str) -> int | None:
    """A handle's declared Seifert genus, usable unless a W+ cork sits on it.

    W- modified handles keep the bound because X embeds in X^-.
    """
    h = x.handle(name)
    if h.seifert_genus is None or name in _w_plus_targets(x):
        return None
    return h.seifert_genus


def build_data_set(
    x: Handlebody,
    m="N",
    basics: BasicClassSet | None = None,
    ledger=None,
    simple_type: bool | None = None,
) -> DataSet:
    """Split H2 into the nucleus part and its orthogonal complement and
    collect the genus ledger for the complement basis."""
    key, mk = resolve_marker(x, m)
    report = verify_nucleus(x, mk)
    if report.verdict == "not_nucleus":
        failed = [k for k, c in report.conditions.items() if c.status == "failed"]
        raise NucleusFailed("nucleus conditions failed: " + ", ".join(failed))
    ledger = _as_ledger(ledger)
    d = report.divisor
    t_vec = x.vector(mk.class_T)
    t_hat_vec = tuple(c // d for c in t_vec)
    s_vec = x.vector(mk.class_S)
    q = x.linking_matrix()
    s = bilinear(s_vec, q, s_vec)
    if bilinear(s_vec, q, t_hat_vec) != 1:
        raise InconsistentMarker("S.T^ must be 1")

    perp = []
    for b in kernel_basis(x.run_over_matrix()):
        bt, bs = bilinear(b, q, t_hat_vec), bilinear(b, q, s_vec)
        c0, c1 = -s * bt + bs, bt
        perp.append(tuple(bi - c0 * ti - c1 * si for bi, ti, si in zip(b, t_hat_vec, s_vec)))
    comp = hermite_basis(perp, len(x.two_handles))

    genus: dict[str, GenusBound] = {}
    labels, squares, gs = [], [], []
    for i, u in enumerate(comp, 1):
        nz = [(j, c) for j, c in enumerate(u) if c]
        label = f"u:{x.two_handles[nz[0][0]].name}" if len(nz) == 1 and abs(nz[0][1]) == 1 else f"u{i}"
        sq = bilinear(u, q, u)
        gb = None
        if label.startswith("u:"):
            sb = _seifert_bound(x, label[2:])
            if sb is not None:
                gb = GenusBound(sb, "seifert_genus")
        declared = ledger.get(label)
        if declared is not None and (gb is None or declared.bound < gb.bound):
            gb = declared
        if gb is None:
            raise MissingGenusData(f"no genus bound for complement class {label} = {_chain(x, u)}")
        genus[label] = gb
        labels.append(label)
        squares.append(sq)
        gs.append(effective_genus(gb.bound, sq))

    snz = [(k_, v) for k_, v in mk.class_S.items() if v]
    if len(snz) == 1 and abs(snz[0][1]) == 1:
        sb = _seifert_bound(x, snz[0][0])
        if sb is not None:
            genus["S_1"] = GenusBound(sb, "seifert_genus")
    declared = ledger.get("S_1")
    if declared is not None and ("S_1" not in genus or declared.bound < genus["S_1"].bound):
        genus["S_1"] = declared

    k = len(comp)
    basis = [s_vec, t_hat_vec] + list(comp)
    qm = gram(basis, q)
    assumptions = [
        {"id": f"nucleus.{c}", "status": r.status, "detail": r.detail} for c, r in report.conditions.items()
    ]
    if basics is None:
        basics = BasicClassSet.from_pairs(k + 2, [((0,) * (k + 2), 1)])
        assumptions.append({"id": "basics.seed", "status": "assumed", "detail": "declared: the zero class with coefficient 1"})
    else:
        if basics.rank != k + 2:
            from .errors import DimensionMismatch

            raise DimensionMismatch(f"basic classes have rank {basics.rank}, data set needs {k + 2}")
        assumptions.append({"id": "basics.seed", "status": "assumed", "detail": "declared by caller"})
    if simple_type is None:
        simple_type = True
        assumptions.append(
            {"id": "simple_type", "status": "axiom", "detail": "a c-embedded torus with non-torsion class forces simple type"}
        )
    else:
        assumptions.append({"id": "simple_type", "status": "assumed", "detail": f"declared {simple_type}"})
    parity = "even" if s % 2 == 0 else "odd"
    return DataSet(
        marker_key=key,
        d_T=d,
        s=s,
        S=_chain(x, s_vec),
        T_hat=_chain(x, t_hat_vec),
        complement=tuple(_chain(x, u) for u in comp),
        u_labels=tuple(labels),
        u_squares=tuple(squares),
        g_u=tuple(gs),
        Q=qm,
        genus=genus,
        basics=basics,
        simple_type=simple_type,
        assumptions=tuple(assumptions),
        parity=parity,
        nucleus=report,
        x=x,
    )


def _full_ledger(ds: DataSet, ledger) -> GenusLedger:
    return _as_ledger(ledger).merged(GenusLedger(dict(ds.genus)))


def rel_genus_query(ds: DataSet) -> dict:
    """The (Q, d, g) triple over the index set (S, T^, u_1..u_k), lambda_0 = S."""
    return {
        "index": ["S", "T_hat"] + list(ds.u_labels),
        "lambda0": 0,
        "Q": ds.Q.tolist(),
        "d": [1, ds.d_T] + [1] * ds.k,
        "g": [1] + list(ds.g_u),
    }


# ---------------------------------------------------------------------------
# Sequence conditions


def _log_step(ds: DataSet, n: int, p: int, prev: int, ledger: GenusLedger, strengthened: bool, strict: bool) -> list[Obligation]:
    d, s = ds.d_T, ds.s
    c = d * (p - 1)
    obs = [obligation(f"log.i[n={n}]", "log.i", {"p_n": p, "p_prev": prev}, p, ">", prev)]
    if n == 2:
        for i, (u2, g) in enumerate(zip(ds.u_squares, ds.g_u), 1):
            t = {"d_T": d, "p_2": p, "u.u": u2, "g(u)": g, "label": ds.u_labels[i - 1]}
            obs.append(obligation(f"log.ii[n=2,i={i}]", "log.ii", t, c + u2, ">", 2 * g - 2))
            if strengthened:
                obs.append(obligation(f"log.vi[n=2,i={i}]", "log.vi", t, c - u2, ">", 2 * g - 2))
    label = sphere_label(prev)
    gb = ledger.get(label)
    if gb is None:
        if strict:
            raise LedgerIncomplete(label)
        obs.append(_missing(label))
    else:
        g = effective_genus(gb.bound, s)
        t = {"d_T": d, "p_n": p, "S.S": s, "g_prev": g, "label": label}
        obs.append(obligation(f"log.iii[n={n}]", "log.iii", t, c + s, ">", 2 * g - 2))
        if strengthened:
            obs.append(obligation(f"log.vii[n={n}]", "log.vii", t, c - s, ">", 2 * g - 2))
    obs.append(obligation(f"log.iv[n={n}]", "log.iv", {"p_n": p, "d_T": d}, gcd(p, d), "==", 1))
    if s % 2 == 0 and d % 2 == 1:
        obs.append(obligation(f"log.v[n={n}]", "log.v", {"p_n": p}, p % 2, "==", 1))
    return obs


def log_obligations(ds: DataSet, ps: Sequence[int], ledger=None, strengthened: bool = False) -> list[Obligation]:
    """Every condition instance for a given p sequence; missing ledger entries become failing obligations."""
    led = _full_ledger(ds, ledger)
    obs = [obligation("log.p1", "log.p1", {"p_1": ps[0]}, ps[0], "==", 1)]
    for n in range(2, len(ps) + 1):
        obs += _log_step(ds, n, ps[n - 1], ps[n - 2], led, strengthened, strict=False)
    return obs


@dataclass(frozen=True)
class SequenceResult:
    values: tuple
    obligations: tuple[Obligation, ...]
    ledger: GenusLedger = field(compare=False, default=None)


def gen_p_sequence(ds: DataSet, n: int, strengthened: bool = False, ledger=None) -> SequenceResult:
    """p_1 = 1 and each later p_n the least integer meeting every active condition."""
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"sequence length must be >= 1, got {n!r}")
    led = _full_ledger(ds, ledger)
    ps = [1]
    obs = [obligation("log.p1", "log.p1", {"p_1": 1}, 1, "==", 1)]
    for k in range(2, n + 1):
        prev = ps[-1]
        led.require(sphere_label(prev))
        p = prev + 1
        while True:
            step = _log_step(ds, k, p, prev, led, strengthened, strict=True)
            if all(o.holds for o in step):
                break
            p += 1
        ps.append(p)
        obs += step
    return SequenceResult(tuple(ps), tuple(obs), led)


def torus_closed_form(k: int) -> list[list[int]]:
    """Alexander polynomial of T(2, 2k+1): sum_{i=0}^{2k} (-1)^i t^(k-i)."""
    return [[k - i, (-1) ** i] for i in range(2 * k, -1, -1)]


def _knot_step(ds: DataSet, n: int, knot: KnotSpec, prev: KnotSpec, ledger: GenusLedger, strengthened: bool, strict: bool) -> list[Obligation]:
    s = ds.s
    deg, deg_prev = knot.alexander.degree(), prev.alexander.degree()
    c = 2 * deg
    obs = [obligation(f"knot.i[n={n}]", "knot.i", {"deg": deg, "deg_prev": deg_prev, "knot": knot.label}, deg, ">", deg_prev)]
    if n == 2:
        for i, (u2, g) in enumerate(zip(ds.u_squares, ds.g_u), 1):
            t = {"deg": deg, "u.u": u2, "g(u)": g, "label": ds.u_labels[i - 1]}
            obs.append(obligation(f"knot.ii[n=2,i={i}]", "knot.ii", t, c + u2, ">", 2 * g - 2))
            if strengthened:
                obs.append(obligation(f"knot.iv[n=2,i={i}]", "knot.iv", t, c - u2, ">", 2 * g - 2))
    label = knot_label(prev)
    gb = ledger.get(label)
    if gb is None:
        if strict:
            raise LedgerIncomplete(label)
        obs.append(_missing(label))
    else:
        g = effective_genus(gb.bound, s)
        t = {"deg": deg, "S.S": s, "g_prev": g, "label": label}
        obs.append(obligation(f"knot.iii[n={n}]", "knot.iii", t, c + s, ">", 2 * g - 2))
        if strengthened:
            obs.append(obligation(f"knot.v[n={n}]", "knot.v", t, c - s, ">", 2 * g - 2))
    if knot.family == "torus":
        obs.append(
            obligation(
                f"knot.alexander[n={n}]",
                "knot.alexander",
                {"knot": knot.label},
                knot.alexander.to_pairs(),
                "==",
                torus_closed_form(knot.param),
            )
        )
    return obs


def knot_obligations(ds: DataSet, knots: Sequence[KnotSpec], ledger=None, strengthened: bool = False) -> list[Obligation]:
    if ds.d_T != 1:
        raise DivisorNotOne(f"knot families need d_T = 1, got {ds.d_T}")
    led = _full_ledger(ds, ledger)
    k1 = knots[0]
    obs = [obligation("knot.k1", "knot.k1", {"knot": k1.label}, k1.alexander.to_pairs(), "==", [[0, 1]])]
    for n in range(2, len(knots) + 1):
        obs += _knot_step(ds, n, knots[n - 1], knots[n - 2], led, strengthened, strict=False)
    return obs


def gen_knot_sequence(ds: DataSet, n: int, strengthened: bool = False, ledger=None) -> SequenceResult:
    """K_1 the unknot, then torus knots T(2, 2k+1) of least admissible k."""
    if ds.d_T != 1:
        raise DivisorNotOne(f"knot families need d_T = 1, got {ds.d_T}")
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"sequence length must be >= 1, got {n!r}")
    led = _full_ledger(ds, ledger)
    ks = [KnotSpec.unknot()]
    obs = [obligation("knot.k1", "knot.k1", {"knot": "unknot"}, [[0, 1]], "==", [[0, 1]])]
    for j in range(2, n + 1):
        prev = ks[-1]
        led.require(knot_label(prev))
        k = prev.param + 1
        while True:
            cand = KnotSpec.torus(k)
            step = _knot_step(ds, j, cand, prev, led, strengthened, strict=True)
            if all(o.holds for o in step):
                break
            k += 1
        ks.append(cand)
        obs += step
    return SequenceResult(tuple(ks), tuple(obs), led)


# ---------------------------------------------------------------------------
# Separation chains


def separation_chains(ds: DataSet, coeffs: Sequence[int], prev_labels: Sequence[str], ledger: GenusLedger, strengthened: bool) -> tuple[list[dict], list[Obligation]]:
    """Adjunction chain for each adjacent pair (n-1, n).

    coeffs[n-1] is the multiplier of the transformed torus class in member n:
    d_T(p_n - 1) for log transforms, 2 deg(Delta) for knot surgery.
    """
    chains, obs = [], []
    for n in range(2, len(coeffs) + 1):
        c = coeffs[n - 1]
        steps: list[tuple[Obligation, str]] = []
        label = prev_labels[n - 2]
        gb = ledger.get(label)
        if gb is None:
            steps.append((_missing(label), "no bound"))
        else:
            g = effective_genus(gb.bound, ds.s)
            t = {"coeff": c, "S.S": ds.s, "g_prev": g, "label": label}
            steps.append((obligation(f"sep.v0[n={n}]", "sep.v0", t, c + ds.s, ">", 2 * g - 2), "a0(v0) = 0"))
            if strengthened:
                steps.append((obligation(f"sep.rev.v0[n={n}]", "sep.rev.v0", t, c - ds.s, ">", 2 * g - 2), "a0(v0) = 0 reversed"))
        steps.append((obligation(f"sep.v1[n={n}]", "sep.v1", {"coeff": c}, c, ">", 0), "a0(v1) = 0"))
        for i, (u2, g) in enumerate(zip(ds.u_squares, ds.g_u), 1):
            t = {"coeff": c, "u.u": u2, "g(u)": g, "label": ds.u_labels[i - 1]}
            steps.append((obligation(f"sep.u[n={n},i={i}]", "sep.u", t, c + u2, ">", 2 * g - 2), f"a0(v{i + 1}) = 0"))
            if strengthened:
                steps.append((obligation(f"sep.rev.u[n={n},i={i}]", "sep.rev.u", t, c - u2, ">", 2 * g - 2), f"a0(v{i + 1}) = 0 reversed"))
        ok = all(o.holds for o, _ in steps)
        chains.append(
            {
                "pair": [n - 1, n],
                "steps": [{"obligation": o.id, "conclusion": concl} for o, concl in steps],
                "contradiction": ok,
                "conclusion": "every basis element has zero S-coefficient, so no basis exists" if ok else "chain incomplete",
            }
        )
        obs += [o for o, _ in steps]
    return chains, obs


# ---------------------------------------------------------------------------
# Family members


def _solve2(t: Mapping[str, int], s: Mapping[str, int], v: Mapping[str, int]) -> tuple[int, int] | None:
    """Integers (a, b) with a*t + b*s = v as chains, if any."""
    names = sorted(set(t) | set(s) | set(v))
    rows = [(t.get(h, 0), s.get(h, 0), v.get(h, 0)) for h in names]
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            (t1, s1, v1), (t2, s2, v2) = rows[i], rows[j]
            det = t1 * s2 - t2 * s1
            if det:
                an, bn = v1 * s2 - v2 * s1, t1 * v2 - t2 * v1
                if an % det or bn % det:
                    return None
                a, b = an // det, bn // det
                return (a, b) if all(a * tt + b * ss == vv for tt, ss, vv in rows) else None
    return None


def transported_basis(ds: DataSet, y: Handlebody, key: str) -> tuple[list[dict[str, int]] | None, str]:
    """The basis (S_p, T^_p, u_1..u_k) inside a family member.

    Complement classes are carried over by matching their nucleus part with
    a T^ + b S; returns None with a reason when that is impossible.
    """
    mk = y.markers[key]
    dv = mk.divisor_dT
    t_hat = {h: v // dv for h, v in mk.class_T.items() if v}
    s1 = {h: v for h, v in mk.class_S.items() if v}
    sq1 = intersect(y, s1, s1)
    if (ds.s - sq1) % 2:
        return None, f"S'.S' = {sq1} and S.S = {ds.s} differ in parity"
    shift = (ds.s - sq1) // 2
    s_p = dict(s1)
    for h, v in t_hat.items():
        s_p[h] = s_p.get(h, 0) + shift * v
    s_p = {h: v for h, v in s_p.items() if v}
    nset = set(ds.x.markers[key].handles)
    out = [s_p, t_hat]
    for u in ds.complement:
        inner = {h: v for h, v in u.items() if h in nset}
        outer = {h: v for h, v in u.items() if h not in nset}
        ab = _solve2(ds.T_hat, ds.S, inner)
        if ab is None:
            return None, "a complement class meets the nucleus outside span(T^, S)"
        a, b = ab
        w = dict(outer)
        for h, v in t_hat.items():
            w[h] = w.get(h, 0) + a * v
        for h, v in s_p.items():
            w[h] = w.get(h, 0) + b * v
        out.append({h: v for h, v in w.items() if v})
    return out, "ok"


def _member_record(ds: DataSet, n: int, y: Handlebody, key: str, param, basics: BasicClassSet, base_ledger: dict) -> tuple[dict, list[Obligation]]:
    rep = homology(y)
    basis, why = transported_basis(ds, y, key)
    obs = [obligation(f"member.ledger[n={n}]", "member.ledger", {"n": n}, rep.ledger(), "==", base_ledger)]
    if basis is None:
        g_list, ok_basis = None, 0
    else:
        vecs = [y.vector(c) for c in basis]
        g_list = gram(vecs, y.linking_matrix()).tolist()
        spans = hermite_basis(vecs, len(y.two_handles)) == hermite_basis(kernel_basis(y.run_over_matrix()), len(y.two_handles))
        ok_basis = int(all(is_cycle(y, c) for c in basis) and spans and len(vecs) == rep.H2_free_rank)
    obs.append(obligation(f"member.basis[n={n}]", "member.basis", {"n": n, "reason": why}, ok_basis, "==", 1))
    obs.append(obligation(f"member.form[n={n}]", "member.form", {"n": n}, g_list, "==", ds.Q.tolist()))
    obs.append(obligation(f"member.nonempty[n={n}]", "member.nonempty", {"n": n}, len(basics), ">", 0))
    rec = {
        "index": n,
        "parameter": param,
        "manifest_sha256": sha256_of(to_manifest(y)),
        "ledger": rep.ledger(),
        "parity": rep.form.parity,
        "basis": [dict(sorted(c.items())) for c in basis] if basis is not None else None,
        "gram": g_list,
        "basic_classes": basics.as_dict(),
    }
    return rec, obs


def _assumption_list(ds: DataSet, ledger_doc: Mapping[str, Mapping]) -> list[dict]:
    out = [dict(a) for a in ds.assumptions]
    for label, e in sorted(ledger_doc.items()):
        st = "proved" if e["provenance"] == "seifert_genus" else "assumed"
        out.append({"id": f"ledger.{label}", "status": st, "detail": e["provenance"]})
    out.append({"id": "homeomorphism", "status": "axiom", "detail": "forms isomorphic via explicit basis and equal boundary ledgers; the nucleus homeomorphism extends"})
    out.append({"id": "sw.product_formula", "status": "axiom", "detail": "basic classes transform by the log multiplier or the Alexander polynomial"})
    return out


@dataclass(frozen=True)
class ExoticaCertificate:
    construction: str
    strengthened: bool
    parameters: Mapping
    data_set: Mapping
    ledger: Mapping
    obligations: tuple[Obligation, ...]
    separation: tuple
    members: tuple
    rel_genus_query: Mapping
    assumptions: tuple
    manifest: Mapping
    extra: Mapping = field(default_factory=dict)

    @property
    def failing(self) -> tuple[str, ...]:
        return tuple(o.id for o in self.obligations if not o.holds)

    @property
    def verdict(self) -> str:
        bad_assumption = any(a["status"] == "failed" for a in self.assumptions)
        nested_ok = all(c.verdict == "accept" for c in self.extra.get("nested", ()))
        return "accept" if not self.failing and not bad_assumption and nested_ok else "reject"

    def as_dict(self) -> dict:
        doc = {
            "schema": CERT_SCHEMA,
            "construction": self.construction,
            "strengthened": self.strengthened,
            "parameters": dict(self.parameters),
            "data_set": dict(self.data_set),
            "ledger": {k: dict(v) for k, v in self.ledger.items()},
            "obligations": [o.as_dict() for o in self.obligations],
            "separation": list(self.separation),
            "members": list(self.members),
            "rel_genus_query": dict(self.rel_genus_query),
            "assumptions": list(self.assumptions),
            "manifest": self.manifest,
            "manifest_sha256": sha256_of(self.manifest),
            "verdict": self.verdict,
        }
        for k, v in self.extra.items():
            doc[k] = [c.as_dict() for c in v] if k == "nested" else v
        return copy.deepcopy(doc)


def certify_family(
    ds: DataSet,
    sequence: Sequence,
    kind: str = "log",
    strengthened: bool = False,
    ledger=None,
    strict: bool = False,
) -> ExoticaCertificate:
    """Certificate for a log-transform family (sequence of p) or a knot
    surgery family (sequence of KnotSpec) on the data set's manifold."""
    if kind not in ("log", "knot"):
        raise BadParameter(f"kind must be 'log' or 'knot', got {kind!r}")
    if not sequence:
        raise BadParameter("empty sequence")
    led = _full_ledger(ds, ledger)
    x, key = ds.x, ds.marker_key
    base = homology(x).ledger()
    if kind == "log":
        ps = [int(p) for p in sequence]
        obs = log_obligations(ds, ps, led, strengthened)
        coeffs = [ds.d_T * (p - 1) for p in ps]
        prev_labels = [sphere_label(p) for p in ps[:-1]]
        params = {"kind": "log", "marker": key, "p": ps}
    else:
        ks = [k if isinstance(k, KnotSpec) else KnotSpec.parse(k) for k in sequence]
        obs = knot_obligations(ds, ks, led, strengthened)
        coeffs = [2 * k.alexander.degree() for k in ks]
        prev_labels = [knot_label(k) for k in ks[:-1]]
        params = {
            "kind": "knot",
            "marker": key,
            "knots": [k.as_dict() for k in ks],
            "alexander": [k.alexander.to_pairs() for k in ks],
        }
    chains, sep_obs = separation_chains(ds, coeffs, prev_labels, led, strengthened)
    obs += sep_obs

    members = []
    for n, item in enumerate(sequence, 1):
        if kind == "log":
            p = ps[n - 1]
            try:
                y = log_transform(x, key, p).manifold
            except ValueError as e:
                obs.append(obligation(f"member.construct[n={n}]", "member.construct", {"error": str(e)}, 0, "==", 1))
                continue
            basics = sw_log_transform(ds.basics, ds.t_dual(), p)
            param = p
        else:
            kk = ks[n - 1]
            y = knot_surgery(x, key, kk).manifold
            basics = sw_knot_surgery(ds.basics, ds.t_dual(), kk.alexander)
            param = kk.as_dict()
        rec, mobs = _member_record(ds, n, y, key, param, basics, base)
        members.append(rec)
        obs += mobs

    labels = set(ds.genus) | set(prev_labels) | set(ds.u_labels)
    ledger_doc = {}
    for label in sorted(labels):
        gb = led.get(label)
        if gb is not None:
            ledger_doc[label] = {"bound": gb.bound, "provenance": gb.provenance}
    cert = ExoticaCertificate(
        construction="log_family" if kind == "log" else "knot_family",
        strengthened=strengthened,
        parameters=params,
        data_set=ds.as_dict(),
        ledger=ledger_doc,
        obligations=tuple(obs),
        separation=tuple(chains),
        members=tuple(members),
        rel_genus_query=rel_genus_query(ds),
        assumptions=tuple(_assumption_list(ds, ledger_doc)),
        manifest=to_manifest(x),
    )
    if strict and cert.verdict != "accept":
        raise ObligationFailure(cert.failing or ("assumptions",))
    return cert


def check_certificate(cert):
    """Independent re-verification; see :mod:`nuclei.checker`."""
    from .checker import check_certificate as _check

    return _check(cert.as_dict() if isinstance(cert, ExoticaCertificate) else cert)


# ---------------------------------------------------------------------------
# Non-Stein obstruction


@dataclass(frozen=True)
class ObstructionRecord:
    op: str
    parameter: object
    q: int
    m: int
    obstructed: bool
    reason: str
    hypotheses: Mapping[str, bool]
    inequality: Mapping | None
    exhaustive: Mapping | None
    both_orientations: bool

    def as_dict(self) -> dict:
        return {
            "op": self.op,
            "parameter": self.parameter,
            "q": self.q,
            "m": self.m,
            "obstructed": self.obstructed,
            "reason": self.reason,
            "hypotheses": dict(self.hypotheses),
            "inequality": None if self.inequality is None else dict(self.inequality),
            "exhaustive": None if self.exhaustive is None else dict(self.exhaustive),
            "both_orientations": self.both_orientations,
        }


def pair_unsatisfiable(q: int, m: int) -> dict:
    """Search all x with |x| <= qm + 2 for |x + qm| <= 2 and |x - qm| <= 2."""
    bound = q * m + 2
    witnesses = [x for x in range(-bound, bound + 1) if abs(x + q * m) <= 2 and abs(x - q * m) <= 2]
    return {"range": [-bound, bound], "witnesses": witnesses, "unsatisfiable": not witnesses}


def nonstein_obstruction(x: Handlebody, m, op, m_val: int = 3, strict: bool = False) -> ObstructionRecord:
    """Certificate that the transformed manifold carries no Stein structure.

    ``op`` is ("log", p) or ("knot", KnotSpec). Unmet hypotheses give a
    record with obstructed=False, or raise HypothesisUnmet when strict.
    """
    key, mk = resolve_marker(x, m)
    kind, param = op
    t_vec = x.vector(mk.class_T)
    nontorsion = any(t_vec)
    if kind == "log":
        p = int(param)
        q = p - 1
        nontrivial, pval = p >= 2, p
        why = "p = 1 leaves the manifold unchanged"
    elif kind == "knot":
        knot = param if isinstance(param, KnotSpec) else KnotSpec.parse(param)
        q = 2 * knot.alexander.degree()
        nontrivial, pval = knot.alexander.terms != ((0, 1),), knot.as_dict()
        why = "trivial Alexander polynomial"
    else:
        raise BadParameter(f"op must be ('log', p) or ('knot', K), got {op!r}")
    hyp = {"nontorsion_T": nontorsion, "nontrivial_operation": nontrivial, "m_at_least_3": m_val >= 3}
    both = bool(mk.torus_handles)
    failed = [k for k, v in hyp.items() if not v]
    if failed:
        reason = "; ".join(
            {"nontorsion_T": "the torus class is torsion", "nontrivial_operation": why, "m_at_least_3": "[S].[T_p] < 3"}[k]
            for k in failed
        )
        if strict:
            if "nontorsion_T" in failed:
                raise TorsionClass(reason)
            raise HypothesisUnmet(reason)
        return ObstructionRecord(kind, pval, q, m_val, False, reason, hyp, None, None, both)
    ineq = {"lhs": 2 * q * m_val, "relation": ">", "rhs": 4, "holds": 2 * q * m_val > 4}
    ex = pair_unsatisfiable(q, m_val)
    ok = ineq["holds"] and ex["unsatisfiable"]
    return ObstructionRecord(kind, pval, q, m_val, ok, "inequality pair unsatisfiable" if ok else "inequality pair satisfiable", hyp, ineq, ex, both)


# ---------------------------------------------------------------------------
# Pipelines


def _good_handlebody_check(x: Handlebody) -> tuple[str, ...]:
    missing = [h.name for h in x.two_handles if h.legendrian is None]
    if missing:
        raise NotGoodHandlebody("handles without Legendrian data: " + ", ".join(missing))
    free = tuple(h.name for h in x.two_handles if all(h.run_over(g) == 0 for g in x.one_handles))
    rank = homology(x).H2_free_rank
    if len(free) != rank:
        raise NotGoodHandlebody(f"{len(free)} handles avoid the 1-handles algebraically, H2 has rank {rank}")
    return free


def _stein_obligations(tag: str, x: Handlebody) -> list[Obligation]:
    obs = []
    for h in x.two_handles:
        tb = h.legendrian.tb if h.legendrian is not None else None
        obs.append(
            obligation(
                f"stein[{tag}].{h.name}",
                "stein",
                {"framing": h.framing, "tb": tb},
                h.framing,
                "==",
                None if tb is None else tb - 1,
            )
        )
    return obs


def _restore_legendrian(y: Handlebody, source: Handlebody, names: Iterable[str]) -> Handlebody:
    names = set(names)
    hs = tuple(
        replace(h, legendrian=source.handle(h.name).legendrian, front=source.handle(h.name).front) if h.name in names else h
        for h in y.two_handles
    )
    return replace(y, two_handles=hs)


@dataclass(frozen=True)
class TailMember:
    p: int
    manifold: Handlebody
    obstruction: ObstructionRecord


@dataclass(frozen=True)
class PipelineResult:
    x_good: Handlebody
    x0: Handlebody
    stein_members: tuple[Handlebody, ...]
    x_tilde_n: Handlebody | None
    x_tilde: Handlebody | None
    tail: tuple[TailMember, ...]
    family: ExoticaCertificate | None
    certificate: ExoticaCertificate
    policy: Mapping


def _member_entry(tag: str, y: Handlebody, role: str) -> dict:
    man = to_manifest(y)
    return {"name": tag, "role": role, "manifest": man, "manifest_sha256": sha256_of(man)}


def _composite_certificate(construction, x, parameters, entries, obs, assumptions, nested, extra) -> ExoticaCertificate:
    return ExoticaCertificate(
        construction=construction,
        strengthened=False,
        parameters=parameters,
        data_set={},
        ledger={},
        obligations=tuple(obs),
        separation=(),
        members=tuple(entries),
        rel_genus_query={},
        assumptions=tuple(assumptions),
        manifest=to_manifest(x),
        extra={"nested": tuple(nested), **extra},
    )


def stein_nonstein_pipeline(
    x: Handlebody,
    m="N",
    n: int = 2,
    ledger=None,
    slides: Sequence[tuple[str, str, int]] = (),
    tail: int = 2,
    m_val: int = 3,
    basics: BasicClassSet | None = None,
) -> PipelineResult:
    """Stein members X_1..X_n, their W- partner X_0, and a non-Stein log
    tail on the cork-twisted X~_n.

    ``slides`` is the handle-slide script bringing X into good form; the
    search for such a script is not automated.
    """
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"n must be >= 1, got {n!r}")
    for h_from, h_over, sign in slides:
        x = slide(x, h_from, h_over, sign)
    key, mk = resolve_marker(x, m)
    free = _good_handlebody_check(x)
    base = homology(x).ledger()
    n_handles = [h for h in mk.handles]
    k0 = next((h for h in n_handles if h in free), None)
    if k0 is None:
        raise NotGoodHandlebody("no nucleus handle avoids the 1-handles")
    others = [h.name for h in x.two_handles if h.name != k0]

    h0 = x.handle(k0)
    p1 = max(1, h0.framing - h0.legendrian.tb + 1)
    ps = [p1 + i for i in range(n)]
    qs = {j: max(1, x.handle(j).framing - x.handle(j).legendrian.tb + 1) for j in others}

    # Step II: all W- modifications
    y = x
    p_ids, q_ids = [], {}
    for p in ps:
        y = w_modify(y, k0, "-", p)
        p_ids.append(y.corks[-1].id)
    for j in others:
        y = w_modify(y, j, "-", qs[j])
        q_ids[j] = y.corks[-1].id
    x0 = y

    # Step III: flip one p-cork and every q-cork, then add zig-zags
    stein_members = []
    for i in range(n):
        z = x0
        for cid in [p_ids[i]] + list(q_ids.values()):
            z = cork_twist(z, cid)
        z = steinify(z)
        bad = stein_check(z)
        if bad:
            raise SteinificationFailed(f"X_{i + 1}: " + ", ".join(v.handle for v in bad))
        stein_members.append(z)
    xn = stein_members[-1]

    n_corks = [p_ids[-1]] + [q_ids[j] for j in others if j in mk.handles]
    x_tilde_n = xn
    for cid in n_corks:
        x_tilde_n = cork_twist(x_tilde_n, cid)
    strip_ids = list(p_ids) + [q_ids[j] for j in others if j in mk.handles]
    x_tilde = strip_corks(xn, strip_ids)
    x_tilde = _restore_legendrian(x_tilde, x, mk.handles)
    bad = stein_check(x_tilde)
    if bad:
        raise SteinificationFailed("X~: " + ", ".join(v.handle for v in bad))

    # non-Stein tail on X~_n
    ds = build_data_set(x_tilde_n, key, basics=basics, ledger=ledger)
    seq = gen_p_sequence(ds, tail + 1, ledger=ledger)
    family = certify_family(ds, seq.values, "log", ledger=ledger)
    tail_members = []
    for p in seq.values[1:]:
        tm = log_transform(x_tilde_n, key, p).manifold
        tail_members.append(TailMember(p, tm, nonstein_obstruction(x_tilde_n, key, ("log", p), m_val)))

    entries = [_member_entry("X", x, "input")]
    entries.append(_member_entry("X_0", x0, "w_minus"))
    entries += [_member_entry(f"X_{i + 1}", z, "stein") for i, z in enumerate(stein_members)]
    entries.append(_member_entry("X~_n", x_tilde_n, "twisted"))
    entries.append(_member_entry("X~", x_tilde, "stein"))
    obs: list[Obligation] = []
    for e, z in zip(entries[1:], [x0] + stein_members + [x_tilde_n, x_tilde]):
        obs.append(obligation(f"ledger[{e['name']}]", "member.ledger", {"member": e["name"]}, homology(z).ledger(), "==", base))
        if e["role"] == "stein":
            obs += _stein_obligations(e["name"], z)
    stripped = strip_corks(x0, [c.id for c in x0.corks])
    obs.append(obligation("strip[X_0]", "strip", {}, to_manifest(stripped)["two_handles"], "==", to_manifest(x)["two_handles"]))
    obstructions = []
    for t in tail_members:
        rec = t.obstruction.as_dict()
        rec["p"] = t.p
        obstructions.append(rec)
        obs.append(
            obligation(
                f"nonstein[p={t.p}]",
                "nonstein",
                {"q": t.obstruction.q, "m": m_val},
                2 * t.obstruction.q * m_val,
                ">",
                4,
            )
        )
    policy = {
        "K0": k0,
        "p": ps,
        "q": qs,
        "cork_ids": {"p": p_ids, "q": q_ids},
        "zigzags": "alternate down/up starting with down",
        "genus_policy": "Seifert bounds only on handles without W+ corks",
    }
    assumptions = [
        {"id": "embedding.X_in_X0", "status": "axiom", "detail": "X embeds in its W- modification"},
        {"id": "embedding.Xi_in_X", "status": "axiom", "detail": "W+ and W- modifications embed in X"},
        {"id": "embedding.X~n_in_X~", "status": "axiom", "detail": "X~_n is X~ with W-modifications"},
        {"id": "stein.verdict", "status": "proved", "detail": "every Stein member passed stein_check"},
        {"id": "stein.members_distinct", "status": "axiom", "detail": "cited result on W+/W- Stein families"},
        {"id": "tail.closed_embedding", "status": "axiom", "detail": "a Stein X~ embeds in a closed symplectic manifold with b2+ > 1"},
        {"id": "tail.S_square", "status": "axiom", "detail": f"a sphere of square -2 with [S].[T_p] = {m_val}"},
    ]
    params = {"n": n, "marker": key, "tail": list(seq.values[1:]), "m": m_val, "slides": [list(s) for s in slides]}
    cert = _composite_certificate(
        "stein_nonstein", x, params, entries, obs, assumptions, [family], {"obstructions": obstructions, "policy": policy}
    )
    return PipelineResult(x, x0, tuple(stein_members), x_tilde_n, x_tilde, tuple(tail_members), family, cert, policy)


@dataclass(frozen=True)
class WPlusResult:
    x0: Handlebody
    x1: Handlebody
    required: Mapping[str, int]
    family: ExoticaCertificate | None
    certificate: ExoticaCertificate


def w_plus_exotica_pipeline(
    x: Handlebody,
    m="N",
    ledger=None,
    n: int = 2,
    basics: BasicClassSet | None = None,
) -> WPlusResult:
    """W+ each handle whose framing is too high for zig-zags, steinify to
    get X_1, and twist the corks back to get X_0."""
    key, mk = resolve_marker(x, m)
    if any(h.legendrian is None for h in x.two_handles):
        from .errors import MissingLegendrianData

        raise MissingLegendrianData(tuple(h.name for h in x.two_handles if h.legendrian is None))
    required = {v.handle: v.required_p for v in stein_check(x) if v.framing > v.tb - 1}
    y = x
    ids = []
    for h, p in required.items():
        y = w_modify(y, h, "+", p)
        ids.append(y.corks[-1].id)
    x1 = steinify(y)
    bad = stein_check(x1)
    if bad:
        raise SteinificationFailed("X_1: " + ", ".join(v.handle for v in bad))
    x0 = x1
    for cid in ids:
        x0 = cork_twist(x0, cid)
    base = homology(x).ledger()
    family = None
    nested = []
    if n >= 1:
        ds = build_data_set(x1, key, basics=basics, ledger=ledger)
        seq = gen_p_sequence(ds, n, ledger=ledger)
        family = certify_family(ds, seq.values, "log", ledger=ledger)
        nested.append(family)
    entries = [_member_entry("X", x, "input"), _member_entry("X_0", x0, "w_minus"), _member_entry("X_1", x1, "stein")]
    obs = [
        obligation("ledger[X_0]", "member.ledger", {"member": "X_0"}, homology(x0).ledger(), "==", base),
        obligation("ledger[X_1]", "member.ledger", {"member": "X_1"}, homology(x1).ledger(), "==", base),
    ]
    obs += _stein_obligations("X_1", x1)
    assumptions = [
        {"id": "embedding.W", "status": "axiom", "detail": "W+ and W- modifications embed in X"},
        {"id": "stein.verdict", "status": "proved", "detail": "X_1 passed stein_check"},
    ]
    params = {"marker": key, "required": dict(required), "cork_ids": ids, "n": n}
    cert = _composite_certificate("w_plus_exotica", x, params, entries, obs, assumptions, nested, {})
    return WPlusResult(x0, x1, required, family, cert)


def certificate_from_dict(doc) -> dict:
    """Light structural validation of a certificate document."""
    if not isinstance(doc, dict) or doc.get("schema") != CERT_SCHEMA:
        raise MalformedCertificate(f"expected schema {CERT_SCHEMA!r}")
    return doc
