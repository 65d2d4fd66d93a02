"""Integer Laurent polynomials in one variable."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping


@dataclass(frozen=True)
class LaurentPoly:
    """Sparse Laurent polynomial; ``terms`` is sorted by exponent, no zero coefficients."""

    terms: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> LaurentPoly:
        return cls(tuple(sorted((int(e), int(c)) for e, c in coeffs.items() if c)))

    @classmethod
    def monomial(cls, exp: int, coef: int = 1) -> LaurentPoly:
        return cls.from_dict({exp: coef})

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls.monomial(0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.from_dict(d)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            return LaurentPoly.from_dict({e: c * other for e, c in self.terms})
        d: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(d)

    __rmul__ = __mul__

    def shift(self, k: int) -> LaurentPoly:
        return LaurentPoly(tuple((e + k, c) for e, c in self.terms))

    def __call__(self, t):
        t = Fraction(t)
        v = sum(c * t**e for e, c in self.terms)
        return int(v) if v.denominator == 1 else v

    def min_exp(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def max_exp(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def span(self) -> int:
        return self.max_exp() - self.min_exp()

    def degree(self) -> int:
        """Top exponent; for a symmetric polynomial this is half the span."""
        return self.max_exp()

    def mirror(self) -> LaurentPoly:
        return LaurentPoly.from_dict({-e: c for e, c in self.terms})

    def is_palindromic(self) -> bool:
        return self == self.mirror()

    def to_pairs(self) -> list[list[int]]:
        return [[e, c] for e, c in self.terms]

    @classmethod
    def from_pairs(cls, pairs) -> LaurentPoly:
        d: dict[int, int] = {}
        for e, c in pairs:
            d[int(e)] = d.get(int(e), 0) + int(c)
        return cls.from_dict(d)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s
