"""Rewrites on handlebodies: log transforms, knot surgery, W-modifications,
cork twists and stripping, and handle slides."""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd
from typing import Iterable, Mapping

from .errors import (
    BadCoefficient,
    BadParameter,
    DivisorNotOne,
    GcdViolation,
    InvalidMarker,
    SelfSlide,
    UnknownHandle,
)
from .handlebody import (
    CorkRecord,
    Handlebody,
    LegendrianData,
    NucleusMarker,
    SurgeryNote,
    TwoHandle,
    intersect,
    make_handle,
)
from .intlat import content, divisibility_split
from .pi1 import free_reduce, inverse, power
from .swadj import KnotSpec, LaurentPoly


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _fresh(base: str, x: Handlebody) -> str:
    taken = set(x.one_handles) | set(x.names())
    if base not in taken:
        return base
    k = 2
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def resolve_marker(x: Handlebody, m) -> tuple[str, NucleusMarker]:
    """Accept a marker key or a marker value; return both."""
    if isinstance(m, str):
        if m not in x.markers:
            raise InvalidMarker(f"no marker named {m!r}")
        return m, x.markers[m]
    for k, v in x.markers.items():
        if v == m:
            return k, v
    raise InvalidMarker("marker is not attached to this handlebody")


def nucleus_square(x: Handlebody, m: NucleusMarker) -> int:
    return intersect(x, m.class_S, m.class_S)


def log_parity(s: int, d: int, p: int) -> str:
    """Parity of the nucleus form after a p-log transform."""
    return "even" if (p * p * s + d * d * (p - 1)) % 2 == 0 else "odd"


@dataclass(frozen=True)
class LogTransformResult:
    manifold: Handlebody
    class_Tp: Mapping[str, int]
    class_Shat: Mapping[str, int]
    s_prime: int
    parity: str
    nucleus_marker: NucleusMarker
    marker_key: str = "N"


def log_transform(x: Handlebody, m, p: int) -> LogTransformResult:
    """p-log transform along the marked torus.

    The torus handle A carries T = d*A. The sphere handle K gets a new
    1-handle x run over d times, and a new (p-1)-framed handle L2 runs over
    x^-p. The new sphere class is p*K + d*L2, and A.(p*K + d*L2) = 1 by
    choosing lk(K, A), lk(L2, A) with p*lk(K, A) + d*lk(L2, A) = 1.
    """
    key, mk = resolve_marker(x, m)
    if not isinstance(p, int) or p < 1:
        raise BadCoefficient(f"log transform multiplicity must be >= 1, got {p!r}")
    try:
        d = content(x.vector(mk.class_T))
    except UnknownHandle as e:
        raise InvalidMarker(str(e)) from None
    if d == 0 or d != mk.divisor_dT:
        raise InvalidMarker(f"class_T has content {d}, marker says {mk.divisor_dT}")
    if gcd(p, d) != 1:
        raise GcdViolation(f"gcd(p={p}, d_T={d}) = {gcd(p, d)}")
    s = nucleus_square(x, mk)
    s_prime = p * p * s + d * d * (p - 1)
    parity = log_parity(s, d, p)
    if p == 1:
        return LogTransformResult(x, dict(mk.class_T), dict(mk.class_S), s, parity, mk, key)

    tnz = {k: v for k, v in mk.class_T.items() if v}
    snz = {k: v for k, v in mk.class_S.items() if v}
    if len(tnz) != 1 or len(snz) != 1 or list(snz.values()) != [1]:
        raise InvalidMarker("log transform needs T = d*A and S = K for single handles A, K")
    (a_name, _), (k_name,) = next(iter(tnz.items())), tuple(snz)
    if a_name == k_name or a_name not in mk.torus_handles:
        raise InvalidMarker("torus and sphere classes must sit on distinct handles, T on a cusp handle")
    a, k = x.handle(a_name), x.handle(k_name)
    if k.word:
        raise InvalidMarker(f"sphere handle {k_name!r} must not run over 1-handles")
    if any(o != k_name and v for o, v in a.linking.items()) or a.word:
        raise InvalidMarker(f"torus handle {a_name!r} may link only the sphere handle")

    g, l2, l1 = _xgcd(d, p)  # d*l2 + p*l1 = 1
    if g < 0:
        l2, l1 = -l2, -l1
    xname = _fresh("x", x)
    l2name = _fresh(f"{k_name}_L2", x)
    new_k = replace(
        k,
        word=free_reduce(k.word + power(xname, d)),
        linking={**{o: v for o, v in k.linking.items() if o != a_name}, **({a_name: l1} if l1 else {})},
        legendrian=None,
        front=None,
        seifert_genus=None,
    )
    new_l2 = make_handle(l2name, word=power(xname, -p), framing=p - 1, linking={a_name: l2})
    new_a = replace(a, linking={**({k_name: l1} if l1 else {}), **({l2name: l2} if l2 else {})})
    hs = []
    for h in x.two_handles:
        if h.name == k_name:
            hs.append(new_k)
        elif h.name == a_name:
            hs.append(new_a)
        else:
            hs.append(h)
    hs.append(new_l2)
    marker = replace(
        mk,
        handles=mk.handles + (l2name,),
        one_handles=mk.one_handles + (xname,),
        class_T={a_name: p * d},
        class_S={k_name: p, l2name: d},
        divisor_dT=p * d,
    )
    markers = {**x.markers, key: marker}
    y = Handlebody(x.one_handles + (xname,), tuple(hs), markers, x.corks, x.notes, x.log)
    y = y.with_log("log_transform", marker=key, p=p)
    return LogTransformResult(y, {a_name: d}, {k_name: p, l2name: d}, s_prime, parity, marker, key)


@dataclass(frozen=True)
class KnotSurgeryResult:
    manifold: Handlebody
    knot: KnotSpec
    multiplier: LaurentPoly
    class_T: Mapping[str, int]
    primitive: bool


def knot_surgery(x: Handlebody, m, knot: KnotSpec) -> KnotSurgeryResult:
    """Knot surgery along the marked torus, recorded symbolically.

    The chain data is unchanged, so every homology invariant is X's own.
    """
    key, mk = resolve_marker(x, m)
    d, _ = divisibility_split(x.vector(mk.class_T))
    if d != 1 or mk.divisor_dT != 1:
        raise DivisorNotOne(f"knot surgery needs d_T = 1, got {d}")
    delta = knot.alexander
    note = SurgeryNote("knot_surgery", key, {"knot": knot.as_dict(), "alexander": delta.to_pairs()})
    y = replace(x, notes=x.notes + (note,)).with_log("knot_surgery", marker=key, knot=knot.label)
    return KnotSurgeryResult(y, knot, delta, dict(mk.class_T), True)


# ---------------------------------------------------------------------------
# W-modifications and corks

AUX_LEGENDRIAN = {"+": LegendrianData(2, 0), "-": LegendrianData(1, 1)}


def _next_cork_id(x: Handlebody) -> str:
    used = {c.id for c in x.corks}
    k = 1
    while f"W{k}" in used:
        k += 1
    return f"W{k}"


def _shift_tb(h: TwoHandle, delta: int) -> TwoHandle:
    if h.legendrian is None or delta == 0:
        return h
    return replace(h, legendrian=LegendrianData(h.legendrian.tb + delta, h.legendrian.r))


def w_modify(x: Handlebody, target: str, sign: str, p: int) -> Handlebody:
    """W+(p) or W-(p) modification of a 2-handle.

    Adds a 1-handle and a 0-framed auxiliary 2-handle running over it once,
    and records them as a cork. W+ raises the target's tb by p. The target's
    front no longer describes it, so the front moves into the record.
    """
    if sign not in ("+", "-"):
        raise BadParameter(f"sign must be + or -, got {sign!r}")
    h = x.handle(target)
    if not isinstance(p, int) or p < 0:
        raise BadCoefficient(f"W-modification coefficient must be >= 1, got {p!r}")
    if p == 0:
        return x
    cid = _next_cork_id(x)
    cname = _fresh(f"c_{cid}", x)
    gname = _fresh(f"gamma_{cid}", x)
    aux = make_handle(gname, word=((cname, 1),), framing=0, legendrian=AUX_LEGENDRIAN[sign])
    rec = CorkRecord(cid, sign, p, target, gname, cname, saved_front=h.front)
    new_h = replace(_shift_tb(h, p if sign == "+" else 0), front=None)
    hs = tuple(new_h if k.name == target else k for k in x.two_handles) + (aux,)
    y = replace(x, one_handles=x.one_handles + (cname,), two_handles=hs, corks=x.corks + (rec,))
    return y.with_log("w_modify", target=target, sign=sign, p=p, id=cid)


def cork_twist(x: Handlebody, cork_id: str) -> Handlebody:
    """Flip a cork's sign, moving the target's tb by -p (+ to -) or +p."""
    rec = x.cork(cork_id)
    new_sign = "-" if rec.sign == "+" else "+"
    delta = -rec.coefficient if rec.sign == "+" else rec.coefficient
    hs = []
    for h in x.two_handles:
        if h.name == rec.target:
            h = _shift_tb(h, delta)
        if h.name == rec.auxiliary and h.legendrian is not None:
            # relative, so a cork stacked on this auxiliary keeps its shift
            a, b, leg = AUX_LEGENDRIAN[rec.sign], AUX_LEGENDRIAN[new_sign], h.legendrian
            h = replace(h, legendrian=LegendrianData(leg.tb + b.tb - a.tb, leg.r + b.r - a.r), front=None)
        hs.append(h)
    corks = tuple(replace(c, sign=new_sign) if c.id == cork_id else c for c in x.corks)
    return replace(x, two_handles=tuple(hs), corks=corks).with_log("cork_twist", id=cork_id)


def strip_corks(x: Handlebody, ids: Iterable[str]) -> Handlebody:
    """Delete cork handles and undo their tb shifts."""
    ids = list(ids)
    for cid in ids:
        x.cork(cid)
    removed = {x.cork(cid).auxiliary for cid in ids}
    dependents = [c.id for c in x.corks if c.id not in ids and (c.target in removed or c.auxiliary in removed)]
    if dependents:
        raise BadParameter(f"corks {dependents} sit on handles being stripped; strip them too")
    # newest first, so corks placed on another cork's handles go before it
    order = sorted(ids, key=lambda cid: [c.id for c in x.corks].index(cid), reverse=True)
    y = x
    for cid in order:
        rec = y.cork(cid)
        remaining = [c for c in y.corks if c.id != cid]
        same_target = [c for c in remaining if c.target == rec.target]
        hs = []
        for h in y.two_handles:
            if h.name == rec.auxiliary:
                continue
            if h.name == rec.target:
                h = _shift_tb(h, -rec.coefficient if rec.sign == "+" else 0)
                if not same_target and rec.saved_front is not None:
                    h = replace(h, front=rec.saved_front)
            if rec.auxiliary in h.linking:
                h = replace(h, linking={k: v for k, v in h.linking.items() if k != rec.auxiliary})
            hs.append(h)
        if same_target and rec.saved_front is not None:
            # hand the saved front to the oldest remaining cork on this target
            heir = same_target[0].id
            remaining = [replace(c, saved_front=rec.saved_front) if c.id == heir else c for c in remaining]
        y = replace(
            y,
            one_handles=tuple(g for g in y.one_handles if g != rec.one_handle),
            two_handles=tuple(hs),
            corks=tuple(remaining),
        )
    return y.with_log("strip_corks", ids=ids)


# ---------------------------------------------------------------------------
# Handle slides


def slide(x: Handlebody, h_from: str, h_over: str, sign: int = 1) -> Handlebody:
    """Slide ``h_from`` over ``h_over``; as a chain, K1 becomes K1 + sign*K2."""
    if h_from == h_over:
        raise SelfSlide(f"cannot slide {h_from!r} over itself")
    if sign not in (1, -1):
        raise BadParameter(f"slide sign must be +1 or -1, got {sign!r}")
    k1, k2 = x.handle(h_from), x.handle(h_over)
    l12 = k1.lk(h_over)
    framing = k1.framing + k2.framing + 2 * sign * l12
    lk: dict[str, int] = {}
    for h in x.two_handles:
        if h.name == h_from:
            continue
        if h.name == h_over:
            v = l12 + sign * k2.framing
        else:
            v = k1.lk(h.name) + sign * k2.lk(h.name)
        if v:
            lk[h.name] = v
    word = free_reduce(k1.word + (k2.word if sign == 1 else inverse(k2.word)))
    new_k1 = TwoHandle(h_from, word, framing, lk, None, None, None)
    hs = []
    for h in x.two_handles:
        if h.name == h_from:
            hs.append(new_k1)
            continue
        hl = {k: v for k, v in h.linking.items() if k != h_from}
        if h.name in lk:
            hl[h_from] = lk[h.name]
        hs.append(replace(h, linking=hl))

    def move(chain):
        c = dict(chain)
        c1 = c.get(h_from, 0)
        if c1:
            c[h_over] = c.get(h_over, 0) - sign * c1
        return {k: v for k, v in c.items() if v}

    markers = {k: replace(m, class_T=move(m.class_T), class_S=move(m.class_S)) for k, m in x.markers.items()}
    y = replace(x, two_handles=tuple(hs), markers=markers)
    return y.with_log("slide", h_from=h_from, h_over=h_over, sign=sign)
