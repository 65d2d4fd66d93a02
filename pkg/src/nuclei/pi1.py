"""Finite group presentations and a bounded Tietze simplifier.

Words are tuples of ``(generator, exponent)`` letters with exponent +1 or -1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd

from .intlat import invariant_factors

DEFAULT_BUDGET = 10_000

Word = tuple  # tuple[tuple[str, int], ...]


def tietze_budget() -> int:
    """Rewrite budget, overridable through ``NF_TIETZE_BUDGET``."""
    raw = os.environ.get("NF_TIETZE_BUDGET")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    return max(0, int(raw))


def free_reduce(word) -> Word:
    out: list[tuple[str, int]] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def inverse(word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def cyclic_reduce(word) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def power(gen: str, k: int) -> Word:
    e = 1 if k >= 0 else -1
    return tuple((gen, e) for _ in range(abs(k)))


def exponent_sum(word, gen: str) -> int:
    return sum(e for g, e in word if g == gen)


def canonical_relator(word) -> Word:
    """Least representative among cyclic rotations of the word and its inverse."""
    w = cyclic_reduce(word)
    if not w:
        return w
    cands = []
    for base in (w, inverse(w)):
        for i in range(len(base)):
            cands.append(base[i:] + base[:i])
    return min(cands)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def abelianization(self) -> tuple[int, ...]:
        """Invariant factors of the abelianized group (0 stands for a Z summand)."""
        if not self.generators:
            return ()
        rows = [[exponent_sum(r, g) for r in self.relators] for g in self.generators]
        return invariant_factors([row for row in rows] if self.relators else [[] for _ in self.generators])


class _Budget:
    def __init__(self, n):
        self.left = n

    def spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        return True


def _substitute(word, gen: str, replacement) -> Word:
    out = []
    inv = inverse(replacement)
    for g, e in word:
        if g == gen:
            out.extend(replacement if e == 1 else inv)
        else:
            out.append((g, e))
    return free_reduce(out)


def _tidy(gens, rels):
    seen = set()
    out = []
    for r in rels:
        c = canonical_relator(r)
        if c and c not in seen:
            seen.add(c)
            out.append(c)
    return list(gens), out


def _step(gens, rels, budget: _Budget):
    """Try one Tietze rewrite. Return new (gens, rels) or None if stuck."""
    # a relator in which some generator occurs exactly once eliminates it
    for idx, r in enumerate(rels):
        for pos, (g, e) in enumerate(r):
            if sum(1 for h, _ in r if h == g) == 1:
                if not budget.spend():
                    return None
                rest = r[pos + 1:] + r[:pos]
                # g^e * rest = 1  =>  g = rest^{-1} when e = 1, g = rest when e = -1
                repl = inverse(rest) if e == 1 else rest
                new_rels = [_substitute(s, g, repl) for j, s in enumerate(rels) if j != idx]
                return _tidy([h for h in gens if h != g], new_rels)
    # power relators in a single generator combine by gcd
    powers: dict[str, list[int]] = {}
    for idx, r in enumerate(rels):
        letters = {g for g, _ in r}
        if len(letters) == 1:
            g = next(iter(letters))
            powers.setdefault(g, []).append(idx)
    for g, idxs in powers.items():
        if len(idxs) >= 2:
            if not budget.spend():
                return None
            k = 0
            for i in idxs:
                k = gcd(k, exponent_sum(rels[i], g))
            new_rels = [r for i, r in enumerate(rels) if i not in idxs] + [power(g, k)]
            return _tidy(gens, new_rels)
    # substitute a relator into another when it makes that relator shorter
    for i, r in enumerate(rels):
        n = len(r)
        for j, s in enumerate(rels):
            if i == j or len(s) < (n + 1) // 2 + 1:
                continue
            for base in (r, inverse(r)):
                for k in range(n):
                    rot = base[k:] + base[:k]
                    # rot = 1, so a prefix of length > n/2 equals the inverse of the rest
                    for plen in range(n // 2 + 1, n + 1):
                        prefix, rest = rot[:plen], rot[plen:]
                        loc = _find(s, prefix)
                        if loc is not None:
                            if not budget.spend():
                                return None
                            new = free_reduce(s[:loc] + inverse(rest) + s[loc + plen:])
                            rels2 = list(rels)
                            rels2[j] = new
                            return _tidy(gens, rels2)
    return None


def _find(word, sub):
    m = len(sub)
    for i in range(len(word) - m + 1):
        if word[i:i + m] == sub:
            return i
    return None


def simplify(p: Presentation, budget: int | None = None) -> Presentation:
    """Apply Tietze rewrites until stuck or the budget is spent."""
    b = _Budget(tietze_budget() if budget is None else budget)
    gens, rels = _tidy(p.generators, p.relators)
    while True:
        nxt = _step(gens, rels, b)
        if nxt is None:
            break
        gens, rels = nxt
    return Presentation(tuple(gens), tuple(rels))


def simplify_presentation(p: Presentation, budget: int | None = None) -> str:
    """Return ``"trivial"``, ``"nontrivial_abelianization"`` or ``"unknown"``."""
    if any(d != 1 for d in p.abelianization()):
        return "nontrivial_abelianization"
    q = simplify(p, budget)
    return "trivial" if not q.generators else "unknown"
