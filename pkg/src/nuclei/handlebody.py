"""Combinatorial Kirby data for 2-handlebodies.

A handlebody is one 0-handle plus named 1-handles and framed 2-handles.
Each 2-handle carries its attaching word in the free group on the
1-handles, its framing, and its linking numbers with the other 2-handles.
Geometric realizability of the declared linking data is not checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .errors import BadParameter, InconsistentMarker, MalformedDiagram, UnknownHandle
from .intlat import (
    FormClass,
    IntMatrix,
    classify_form,
    content,
    gram,
    invariant_factors,
    kernel_basis,
)
from .pi1 import Presentation, free_reduce, simplify_presentation

STATUSES = ("proved", "failed", "assumed", "unknown")


@dataclass(frozen=True)
class LegendrianData:
    tb: int
    r: int


@dataclass(frozen=True)
class TwoHandle:
    name: str
    word: tuple = ()
    framing: int = 0
    linking: Mapping[str, int] = field(default_factory=dict)
    legendrian: LegendrianData | None = None
    seifert_genus: int | None = None
    front: tuple[str, ...] | None = None

    def lk(self, other: str) -> int:
        return self.linking.get(other, 0)

    def run_over(self, gen: str) -> int:
        return sum(e for g, e in self.word if g == gen)


@dataclass(frozen=True)
class NucleusMarker:
    """Marks a nucleus sub-handlebody and its c-embedded torus.

    ``class_T`` and ``class_S`` are 2-chains: integer coefficients on
    2-handle names, required to be cycles.
    """

    handles: tuple[str, ...]
    torus_handles: tuple[str, ...]
    class_T: Mapping[str, int]
    class_S: Mapping[str, int]
    divisor_dT: int = 1
    one_handles: tuple[str, ...] = ()
    pi1_status: str = "unknown"


@dataclass(frozen=True)
class CorkRecord:
    id: str
    sign: str  # "+" or "-"
    coefficient: int
    target: str
    auxiliary: str
    one_handle: str
    saved_front: tuple[str, ...] | None = None


@dataclass(frozen=True)
class SurgeryNote:
    """Symbolic record of an operation with no explicit handle picture."""

    kind: str
    marker: str
    params: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class Handlebody:
    one_handles: tuple[str, ...] = ()
    two_handles: tuple[TwoHandle, ...] = ()
    markers: Mapping[str, NucleusMarker] = field(default_factory=dict)
    corks: tuple[CorkRecord, ...] = ()
    notes: tuple[SurgeryNote, ...] = ()
    log: tuple = field(default=(), compare=False)

    def __post_init__(self):
        validate(self)

    # lookups
    def names(self) -> tuple[str, ...]:
        return tuple(h.name for h in self.two_handles)

    def handle(self, name: str) -> TwoHandle:
        for h in self.two_handles:
            if h.name == name:
                return h
        raise UnknownHandle(f"no 2-handle named {name!r}")

    def has_handle(self, name: str) -> bool:
        return any(h.name == name for h in self.two_handles)

    def cork(self, cork_id: str) -> CorkRecord:
        for c in self.corks:
            if c.id == cork_id:
                return c
        from .errors import UnknownCork

        raise UnknownCork(f"no cork record {cork_id!r}")

    # chain data
    def linking_matrix(self) -> IntMatrix:
        hs = self.two_handles
        return IntMatrix.from_rows(
            [[h.framing if h.name == k.name else h.lk(k.name) for k in hs] for h in hs], len(hs)
        )

    def run_over_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[h.run_over(g) for h in self.two_handles] for g in self.one_handles], len(self.two_handles)
        )

    def vector(self, chain: Mapping[str, int]) -> tuple[int, ...]:
        for k in chain:
            if not self.has_handle(k):
                raise UnknownHandle(f"chain refers to unknown handle {k!r}")
        return tuple(chain.get(h.name, 0) for h in self.two_handles)

    def with_log(self, op: str, **params) -> Handlebody:
        return replace(self, log=self.log + ({"op": op, **params},))


def validate(x: Handlebody) -> None:
    ones = set(x.one_handles)
    if len(ones) != len(x.one_handles):
        raise MalformedDiagram("duplicate 1-handle names")
    names = [h.name for h in x.two_handles]
    if len(set(names)) != len(names):
        raise MalformedDiagram("duplicate 2-handle names")
    if ones & set(names):
        raise MalformedDiagram("1-handle and 2-handle names overlap")
    by_name = {h.name: h for h in x.two_handles}
    for h in x.two_handles:
        for letter in h.word:
            if len(letter) != 2 or letter[1] not in (1, -1):
                raise MalformedDiagram(f"handle {h.name!r}: bad letter {letter!r}")
            if letter[0] not in ones:
                raise MalformedDiagram(f"handle {h.name!r} runs over unknown 1-handle {letter[0]!r}")
        for other, v in h.linking.items():
            if other == h.name:
                raise MalformedDiagram(f"handle {h.name!r}: self-linking belongs in the framing")
            if other not in by_name:
                raise MalformedDiagram(f"handle {h.name!r} links unknown handle {other!r}")
            if by_name[other].lk(h.name) != v:
                raise MalformedDiagram(f"linking of {h.name!r} and {other!r} is not symmetric")
        if h.seifert_genus is not None and h.seifert_genus < 0:
            raise MalformedDiagram(f"handle {h.name!r}: negative Seifert genus")
    for c in x.corks:
        if c.target not in by_name or c.auxiliary not in by_name or c.one_handle not in ones:
            raise MalformedDiagram(f"cork record {c.id!r} refers to missing handles")


def make_handle(name, word=(), framing=0, linking=None, legendrian=None, seifert_genus=None, front=None) -> TwoHandle:
    """Build a 2-handle, normalizing the word and dropping zero linking entries."""
    lk = {k: int(v) for k, v in (linking or {}).items() if v}
    leg = legendrian
    if leg is not None and not isinstance(leg, LegendrianData):
        leg = LegendrianData(*leg)
    return TwoHandle(
        name=name,
        word=free_reduce(tuple((g, int(e)) for g, e in word)),
        framing=int(framing),
        linking=lk,
        legendrian=leg,
        seifert_genus=seifert_genus,
        front=tuple(front) if front is not None else None,
    )


def build(one_handles: Sequence[str], handles: Sequence[TwoHandle], **kw) -> Handlebody:
    """Assemble a handlebody, symmetrizing linking data given on either side."""
    lk: dict[str, dict[str, int]] = {h.name: dict(h.linking) for h in handles}
    for h in handles:
        for other, v in h.linking.items():
            if other in lk:
                prev = lk[other].get(h.name)
                if prev is not None and prev != v:
                    raise MalformedDiagram(f"linking of {h.name!r} and {other!r} is not symmetric")
                lk[other][h.name] = v
    hs = tuple(replace(h, linking={k: v for k, v in lk[h.name].items() if v}) for h in handles)
    return Handlebody(tuple(one_handles), hs, **kw)


# ---------------------------------------------------------------------------
# Homology


@dataclass(frozen=True)
class HomologyReport:
    H1: tuple[int, ...]
    H2_free_rank: int
    H2_torsion: tuple[int, ...]
    form: FormClass
    boundary_H1: tuple[int, ...]
    form_matrix: IntMatrix = field(compare=False, default=None)
    h2_basis: tuple = field(compare=False, default=())

    def as_dict(self) -> dict:
        return {
            "H1": list(self.H1),
            "H2_free_rank": self.H2_free_rank,
            "H2_torsion": list(self.H2_torsion),
            "form": self.form.as_dict(),
            "form_matrix": self.form_matrix.tolist() if self.form_matrix is not None else None,
            "boundary_H1": list(self.boundary_H1),
        }

    def ledger(self) -> dict:
        """The comparable part of the report (no basis-dependent data)."""
        d = self.as_dict()
        d.pop("form_matrix")
        return d


def boundary_presentation(x: Handlebody) -> IntMatrix:
    """Presentation matrix of H1 of the boundary.

    Columns and rows: 2-handles then 1-handles, each sorted by name; a
    1-handle behaves as a 0-framed unknot linking each 2-handle by its
    run-over count.
    """
    hs = sorted(x.two_handles, key=lambda h: h.name)
    ones = sorted(x.one_handles)
    n = len(hs) + len(ones)
    out = [[0] * n for _ in range(n)]
    for i, h in enumerate(hs):
        for j, k in enumerate(hs):
            out[i][j] = h.framing if i == j else h.lk(k.name)
        for j, g in enumerate(ones):
            out[i][len(hs) + j] = out[len(hs) + j][i] = h.run_over(g)
    return IntMatrix.from_rows(out, n)


def homology(x: Handlebody) -> HomologyReport:
    validate(x)
    r = x.run_over_matrix()
    h1 = invariant_factors(r) if x.one_handles else ()
    basis = kernel_basis(r)
    q = gram(basis, x.linking_matrix())
    return HomologyReport(
        H1=h1,
        H2_free_rank=len(basis),
        H2_torsion=(),
        form=classify_form(q),
        boundary_H1=invariant_factors(boundary_presentation(x)),
        form_matrix=q,
        h2_basis=basis,
    )


def is_cycle(x: Handlebody, chain: Mapping[str, int]) -> bool:
    v = x.vector(chain)
    return all(sum(h.run_over(g) * c for h, c in zip(x.two_handles, v)) == 0 for g in x.one_handles)


def intersect(x: Handlebody, a: Mapping[str, int], b: Mapping[str, int]) -> int:
    """Intersection number of two 2-cycles, given as chains on 2-handle names."""
    from .intlat import bilinear

    return bilinear(x.vector(a), x.linking_matrix(), x.vector(b))


def pi1_presentation(x: Handlebody) -> Presentation:
    return Presentation(tuple(x.one_handles), tuple(h.word for h in x.two_handles))


def sub_handlebody(x: Handlebody, handles: Sequence[str], one_handles: Sequence[str]) -> Handlebody:
    keep = set(handles)
    ones = tuple(g for g in x.one_handles if g in set(one_handles))
    hs = []
    for h in x.two_handles:
        if h.name in keep:
            for g, _ in h.word:
                if g not in ones:
                    raise InconsistentMarker(f"handle {h.name!r} runs over 1-handle {g!r} outside the marked part")
            hs.append(replace(h, linking={k: v for k, v in h.linking.items() if k in keep}))
    missing = keep - {h.name for h in hs}
    if missing:
        raise InconsistentMarker("marker names unknown handles: " + ", ".join(sorted(missing)))
    return Handlebody(ones, tuple(hs))


# ---------------------------------------------------------------------------
# Nucleus verification


@dataclass(frozen=True)
class ConditionReport:
    status: str
    detail: str


@dataclass(frozen=True)
class NucleusReport:
    conditions: Mapping[str, ConditionReport]
    divisor: int
    verdict: str

    def as_dict(self) -> dict:
        return {
            "conditions": {k: {"status": v.status, "detail": v.detail} for k, v in self.conditions.items()},
            "divisor": self.divisor,
            "verdict": self.verdict,
        }


def marker_classes(x: Handlebody, m: NucleusMarker) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Validate marker chains and return (class_T, class_S) as vectors."""
    for nm in tuple(m.class_T) + tuple(m.class_S) + tuple(m.torus_handles):
        if nm not in m.handles:
            raise InconsistentMarker(f"marker class uses handle {nm!r} outside the nucleus")
    try:
        t, s = x.vector(m.class_T), x.vector(m.class_S)
    except UnknownHandle as e:
        raise InconsistentMarker(str(e)) from None
    if not any(t):
        raise InconsistentMarker("class_T is zero")
    if not is_cycle(x, m.class_T) or not is_cycle(x, m.class_S):
        raise InconsistentMarker("marker classes must be cycles")
    return t, s


def verify_nucleus(x: Handlebody, m: NucleusMarker, budget: int | None = None) -> NucleusReport:
    """Status of the five nucleus conditions for the marked sub-handlebody."""
    t, s = marker_classes(x, m)
    n = sub_handlebody(x, m.handles, m.one_handles)
    rep = homology(n)
    conds: dict[str, ConditionReport] = {}

    # (i) simply connected
    if rep.H1:
        conds["i"] = ConditionReport("failed", f"H1 invariant factors {list(rep.H1)}")
    else:
        st = simplify_presentation(pi1_presentation(n), budget)
        if st == "trivial":
            conds["i"] = ConditionReport("proved", "presentation simplifies to the trivial group")
        else:
            conds["i"] = ConditionReport("unknown", "H1 = 0 but the Tietze budget ran out")

    # (ii) H2 = Z^2, unimodular form, homology sphere boundary
    bad = []
    if rep.H2_free_rank != 2:
        bad.append(f"H2 rank {rep.H2_free_rank}")
    if not rep.form.unimodular:
        bad.append(f"form determinant {rep.form.determinant}")
    if rep.boundary_H1:
        bad.append(f"boundary H1 factors {list(rep.boundary_H1)}")
    conds["ii"] = ConditionReport("failed" if bad else "proved", "; ".join(bad) or "H2 = Z^2, unimodular, boundary homology sphere")

    # (iii) cusp sub-diagram carrying T, T.T = 0
    tt = intersect(x, m.class_T, m.class_T)
    if not m.torus_handles:
        conds["iii"] = ConditionReport("failed", "no cusp sub-diagram marked")
    elif any(k not in m.torus_handles for k, v in m.class_T.items() if v):
        conds["iii"] = ConditionReport("failed", "class_T is not carried by the cusp sub-diagram")
    elif tt != 0:
        conds["iii"] = ConditionReport("failed", f"T.T = {tt}")
    else:
        conds["iii"] = ConditionReport("proved", "T carried by the marked cusp handles, T.T = 0")

    # (iv) divisor = content of [T], S.T^ = 1
    d = content(t)
    st_ = intersect(x, m.class_S, m.class_T)
    if d != m.divisor_dT:
        conds["iv"] = ConditionReport("failed", f"content of [T] is {d}, marker says {m.divisor_dT}")
    elif st_ != d:
        conds["iv"] = ConditionReport("failed", f"S.T = {st_}, expected d_T = {d}")
    else:
        conds["iv"] = ConditionReport("proved", f"d_T = {d}, S.T^ = 1")

    # (v) peripheral surjectivity: trusted only from constructors
    conds["v"] = ConditionReport(m.pi1_status, "declared by constructor" if m.pi1_status == "proved" else "not machine-checked")

    sts = [c.status for c in conds.values()]
    if "failed" in sts:
        verdict = "not_nucleus"
    elif all(s_ == "proved" for s_ in sts):
        verdict = "nucleus"
    else:
        verdict = "nucleus_with_assumptions"
    return NucleusReport(conds, d, verdict)


# ---------------------------------------------------------------------------
# Constructors


TREFOIL_FRONT = ("LC 0", "LC 2", "X+ 1", "X+ 1", "X+ 1", "RCd 0", "RCu 0")
UNKNOT_FRONT = ("LC 0", "RCd 0")


def gompf_nucleus(n: int) -> Handlebody:
    """G(n): 0-framed trefoil linked once with a (-n)-framed unknot."""
    if not isinstance(n, int) or n < 1:
        raise BadParameter(f"nucleus index must be >= 1, got {n!r}")
    if n >= 2:
        from .legendrian import zigzag_front, tb_rotation, parse_front

        front = UNKNOT_FRONT
        for k in range(n - 2):
            front = zigzag_front(front, "down" if k % 2 == 0 else "up")
        fiber_leg = tb_rotation(parse_front(TREFOIL_FRONT))
        sphere_leg = tb_rotation(parse_front(front))
        fiber_front, sphere_front = TREFOIL_FRONT, tuple(front)
    else:
        fiber_leg = sphere_leg = fiber_front = sphere_front = None
    fiber = make_handle("fiber", framing=0, linking={"sphere": 1}, legendrian=fiber_leg, seifert_genus=1, front=fiber_front)
    sphere = make_handle("sphere", framing=-n, linking={"fiber": 1}, legendrian=sphere_leg, seifert_genus=0, front=sphere_front)
    marker = NucleusMarker(
        handles=("fiber", "sphere"),
        torus_handles=("fiber",),
        class_T={"fiber": 1},
        class_S={"sphere": 1},
        divisor_dT=1,
        pi1_status="proved",
    )
    return Handlebody((), (fiber, sphere), {"N": marker}).with_log("gompf_nucleus", n=n)


def cusp_neighborhood() -> Handlebody:
    """Cusp neighborhood: a single 0-framed trefoil."""
    h = make_handle("fiber", framing=0, seifert_genus=1)
    return Handlebody((), (h,)).with_log("cusp_neighborhood")


def _fresh(name: str, taken: set[str]) -> str:
    if name not in taken:
        return name
    k = 2
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def rename(x: Handlebody, mapping: Mapping[str, str]) -> Handlebody:
    """Rename 1- and 2-handles (and markers/corks referring to them)."""
    f = lambda s: mapping.get(s, s)  # noqa: E731
    hs = tuple(
        replace(
            h,
            name=f(h.name),
            word=tuple((f(g), e) for g, e in h.word),
            linking={f(k): v for k, v in h.linking.items()},
        )
        for h in x.two_handles
    )
    markers = {
        k: replace(
            m,
            handles=tuple(f(s) for s in m.handles),
            one_handles=tuple(f(s) for s in m.one_handles),
            torus_handles=tuple(f(s) for s in m.torus_handles),
            class_T={f(a): b for a, b in m.class_T.items()},
            class_S={f(a): b for a, b in m.class_S.items()},
        )
        for k, m in x.markers.items()
    }
    corks = tuple(replace(c, target=f(c.target), auxiliary=f(c.auxiliary), one_handle=f(c.one_handle)) for c in x.corks)
    return Handlebody(tuple(f(g) for g in x.one_handles), hs, markers, corks, x.notes, x.log)


def boundary_sum(x: Handlebody, y: Handlebody) -> Handlebody:
    """Boundary sum: disjoint handle lists, no cross-linking.

    Clashing names in ``y`` get a numeric suffix; so do marker and cork ids.
    """
    taken = set(x.one_handles) | set(x.names())
    mapping = {}
    for nm in tuple(y.one_handles) + y.names():
        new = _fresh(nm, taken)
        taken.add(new)
        mapping[nm] = new
    y2 = rename(y, mapping)
    markers = dict(x.markers)
    for k, m in y2.markers.items():
        markers[_fresh(k, set(markers))] = m
    cork_ids = {c.id for c in x.corks}
    corks = list(x.corks)
    for c in y2.corks:
        new_id = _fresh(c.id, cork_ids)
        cork_ids.add(new_id)
        corks.append(replace(c, id=new_id))
    return Handlebody(
        x.one_handles + y2.one_handles,
        x.two_handles + y2.two_handles,
        markers,
        tuple(corks),
        x.notes + y2.notes,
        x.log + ({"op": "boundary_sum", "with": list(y.log)},),
    )
