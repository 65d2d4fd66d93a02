"""Formal Seiberg-Witten calculus and the adjunction inequality.

Basic classes are declared or transformed symbolically; nothing here
solves any equation. Classes in H^2 are integer vectors in the basis dual
to the chosen H_2 basis, so the pairing with a homology class is the dot
product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    BadCoefficient,
    BadParameter,
    DimensionMismatch,
    EmptyBasicSet,
    NonSquare,
    TorsionClass,
)
from .intlat import IntMatrix, as_matrix, bareiss_det, bilinear
from .laurent import LaurentPoly


# ---------------------------------------------------------------------------
# Alexander polynomials


def _balanced_digits(value: int, base: int) -> list[int]:
    """Ascending digits of ``value`` in base ``base`` with |digit| <= base // 2."""
    out = []
    while value:
        r = value % base
        if r > base // 2:
            r -= base
        out.append(r)
        value = (value - r) // base
    return out


def alexander(v) -> LaurentPoly:
    """Symmetrized Alexander polynomial from a Seifert matrix.

    Computes det(V - t V^T), centres the exponents and fixes the sign so
    that the value at 1 is positive.
    """
    rows = [list(r) for r in (v.entries if isinstance(v, IntMatrix) else v)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NonSquare(f"Seifert matrix must be square, got {n} rows of lengths {[len(r) for r in rows]}")
    if n == 0:
        return LaurentPoly.one()
    # every coefficient is bounded by the permanent of |V| + |V^T|, hence by
    # the product of its row sums; evaluating at t = 2*bound + 1 is injective
    bound = 1
    for i in range(n):
        bound *= max(1, sum(abs(rows[i][j]) + abs(rows[j][i]) for j in range(n)))
    base = 2 * bound + 1
    coeffs = _balanced_digits(bareiss_det([[rows[i][j] - base * rows[j][i] for j in range(n)] for i in range(n)]), base)
    poly = LaurentPoly.from_dict({e: c for e, c in enumerate(coeffs)})
    if not poly:
        return poly
    lo, hi = poly.min_exp(), poly.max_exp()
    poly = poly.shift(-((lo + hi) // 2))
    at1 = poly(1)
    if at1 < 0 or (at1 == 0 and poly.terms[-1][1] < 0):
        poly = -poly
    return poly


def torus_seifert_matrix(k: int) -> IntMatrix:
    """Seifert matrix of the (2, 2k+1) torus knot, size 2k."""
    n = 2 * k
    return IntMatrix.from_rows([[-1 if i == j else (1 if j == i + 1 else 0) for j in range(n)] for i in range(n)], n)


def twist_seifert_matrix(k: int) -> IntMatrix:
    return IntMatrix.from_rows([[-1, 1], [0, k]])


@dataclass(frozen=True)
class KnotSpec:
    """A knot given by a family name and parameter, or by a Seifert matrix."""

    family: str  # "torus", "twist", "seifert_matrix"
    param: int = 0
    matrix: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def unknot(cls) -> KnotSpec:
        return cls("torus", 0)

    @classmethod
    def torus(cls, k: int) -> KnotSpec:
        """The (2, 2k+1) torus knot; k = 0 is the unknot, k = 1 the trefoil."""
        if k < 0:
            raise BadParameter("torus knot parameter must be >= 0")
        return cls("torus", k)

    @classmethod
    def twist(cls, k: int) -> KnotSpec:
        return cls("twist", k)

    @classmethod
    def from_matrix(cls, v) -> KnotSpec:
        m = as_matrix(v) if v else IntMatrix(0, 0, ())
        if not m.is_square():
            raise NonSquare("Seifert matrix must be square")
        return cls("seifert_matrix", 0, m.entries)

    @classmethod
    def parse(cls, text: str) -> KnotSpec:
        s = text.strip().replace(" ", "")
        if s == "unknot":
            return cls.unknot()
        if s == "trefoil":
            return cls.torus(1)
        m = re.fullmatch(r"T\(2,(-?\d+)\)", s)
        if m:
            q = int(m.group(1))
            if q < 1 or q % 2 == 0:
                raise BadParameter(f"only T(2, odd >= 1) torus knots are supported, got {text!r}")
            return cls.torus((q - 1) // 2)
        m = re.fullmatch(r"twist\((-?\d+)\)", s)
        if m:
            return cls.twist(int(m.group(1)))
        raise BadParameter(f"unrecognized knot {text!r}")

    def seifert_matrix(self) -> IntMatrix:
        if self.family == "torus":
            return torus_seifert_matrix(self.param)
        if self.family == "twist":
            return twist_seifert_matrix(self.param)
        n = len(self.matrix)
        return IntMatrix(n, n, self.matrix)

    @property
    def alexander(self) -> LaurentPoly:
        return alexander(self.seifert_matrix())

    @property
    def seifert_genus(self) -> int:
        """Genus of the Seifert surface the matrix comes from (an upper bound in general)."""
        if self.family == "torus":
            return self.param
        if self.family == "twist":
            return 0 if self.param == 0 else 1
        return len(self.matrix) // 2

    @property
    def label(self) -> str:
        if self.family == "torus":
            return "unknot" if self.param == 0 else f"T(2,{2 * self.param + 1})"
        if self.family == "twist":
            return f"twist({self.param})"
        return "V" + str([list(r) for r in self.matrix])

    def as_dict(self) -> dict:
        d = {"family": self.family, "param": self.param}
        if self.family == "seifert_matrix":
            d["matrix"] = [list(r) for r in self.matrix]
        return d

    @classmethod
    def from_dict(cls, d) -> KnotSpec:
        return cls(d["family"], int(d.get("param", 0)), tuple(tuple(r) for r in d.get("matrix", ())))


# ---------------------------------------------------------------------------
# SW multipliers and basic classes


def log_multiplier(p: int) -> LaurentPoly:
    """t^-(p-1) + t^-(p-3) + ... + t^(p-1)."""
    if not isinstance(p, int) or p < 1:
        raise BadCoefficient(f"log transform multiplicity must be >= 1, got {p!r}")
    return LaurentPoly.from_dict({-(p - 1) + 2 * i: 1 for i in range(p)})


@dataclass(frozen=True)
class BasicClassSet:
    rank: int
    classes: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_pairs(cls, rank: int, pairs: Iterable[tuple[Sequence[int], int]]) -> BasicClassSet:
        acc: dict[tuple[int, ...], int] = {}
        for vec, coef in pairs:
            v = tuple(int(x) for x in vec)
            if len(v) != rank:
                raise DimensionMismatch(f"class {v} has length {len(v)}, ambient rank is {rank}")
            acc[v] = acc.get(v, 0) + int(coef)
        return cls(rank, tuple(sorted((v, c) for v, c in acc.items() if c)))

    def __len__(self) -> int:
        return len(self.classes)

    def vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(v for v, _ in self.classes)

    def as_dict(self) -> dict:
        return {"rank": self.rank, "classes": [[list(v), c] for v, c in self.classes]}

    @classmethod
    def from_dict(cls, d) -> BasicClassSet:
        return cls.from_pairs(int(d["rank"]), [(v, c) for v, c in d["classes"]])


def _shift_by(sw: BasicClassSet, direction: Sequence[int], poly: LaurentPoly, scale: int) -> BasicClassSet:
    t = tuple(int(x) for x in direction)
    if len(t) != sw.rank:
        raise DimensionMismatch(f"class of length {len(t)} against ambient rank {sw.rank}")
    if not any(t):
        raise TorsionClass("the torus class is torsion; the product formula does not apply")
    pairs = []
    for vec, coef in sw.classes:
        for e, c in poly.terms:
            pairs.append((tuple(a + scale * e * b for a, b in zip(vec, t)), coef * c))
    return BasicClassSet.from_pairs(sw.rank, pairs)


def sw_log_transform(sw: BasicClassSet, t_p: Sequence[int], p: int) -> BasicClassSet:
    """Multiply by the log multiplier with t = PD[T_p]."""
    return _shift_by(sw, t_p, log_multiplier(p), 1)


def sw_knot_surgery(sw: BasicClassSet, t: Sequence[int], delta: LaurentPoly) -> BasicClassSet:
    """Multiply by the Alexander polynomial with t = PD(2[T])."""
    return _shift_by(sw, t, delta, 2)


# ---------------------------------------------------------------------------
# Adjunction


def pairing(k: Sequence[int], alpha: Sequence[int]) -> int:
    if len(k) != len(alpha):
        raise DimensionMismatch(f"cohomology class of length {len(k)} against homology class of length {len(alpha)}")
    return sum(a * b for a, b in zip(k, alpha))


def adjunction_check(k: Sequence[int], alpha: Sequence[int], q, g: int, simple_type: bool) -> str:
    """``"satisfied"``, ``"violated"`` or ``"not_applicable"``.

    The inequality is alpha.alpha + |<K, alpha>| <= 2g - 2, applicable when
    alpha.alpha >= 0, or when the manifold has simple type and g >= 1.
    """
    q = as_matrix(q)
    if len(alpha) != q.rows:
        raise DimensionMismatch(f"class of length {len(alpha)} against a {q.rows}x{q.cols} form")
    kp = pairing(k, alpha)
    if not any(alpha):
        return "not_applicable"
    sq = bilinear(alpha, q, alpha)
    if sq < 0 and not (simple_type and g >= 1):
        return "not_applicable"
    return "satisfied" if sq + abs(kp) <= 2 * g - 2 else "violated"


def genus_lower_bound(basics: BasicClassSet, alpha: Sequence[int], q, simple_type: bool) -> int:
    """Least genus allowed by adjunction against every basic class.

    For negative squares the bound concerns max{g, 1}; it is 0 when no
    inequality applies.
    """
    if not basics.classes:
        raise EmptyBasicSet("no basic classes to test against")
    q = as_matrix(q)
    if len(alpha) != q.rows:
        raise DimensionMismatch(f"class of length {len(alpha)} against a {q.rows}x{q.cols} form")
    if not any(alpha):
        raise TorsionClass("adjunction needs a non-torsion class")
    sq = bilinear(alpha, q, alpha)
    if sq < 0 and not simple_type:
        return 0
    worst = max(abs(pairing(k, alpha)) for k in basics.vectors())
    need = sq + worst + 2  # 2g >= need
    return max(0, -(-need // 2))
