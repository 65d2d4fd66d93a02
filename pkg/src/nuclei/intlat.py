"""Exact integer linear algebra.

Smith normal form with unimodular transforms, cokernels and kernels of
integer matrices, classification of symmetric bilinear forms, and lattice
vector divisibility. Everything uses Python integers and
:class:`fractions.Fraction`; there is no floating point in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NonSymmetric, ZeroVector


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative dimension")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols_b = other.transpose().entries
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols_b) for row in self.entries
        )
        return IntMatrix(self.rows, other.cols, out)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        return bareiss_det(self.tolist())


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m)


def bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """``left @ M @ right`` is diagonal with entries ``diagonal``."""

    diagonal: tuple[int, ...]
    left_transform: IntMatrix
    right_transform: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_normal_form(m) -> SNFResult:
    """Smith normal form of an integer matrix, with unimodular transforms.

    Total function. The diagonal has ``min(rows, cols)`` entries, all
    non-negative, each dividing the next (zeros trail).
    """
    m = as_matrix(m)
    rows, cols = m.rows, m.cols
    a = m.tolist()
    left = IntMatrix.identity(rows).tolist()
    right = IntMatrix.identity(cols).tolist()

    def row_op(i, j, p, q, r, s):
        # rows (i, j) <- (p*row_i + q*row_j, r*row_i + s*row_j), det = +-1
        for mat in (a, left):
            ri, rj = mat[i], mat[j]
            mat[i] = [p * x + q * y for x, y in zip(ri, rj)]
            mat[j] = [r * x + s * y for x, y in zip(ri, rj)]

    def col_op(i, j, p, q, r, s):
        for mat in (a, right):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = p * x + q * y
                row[j] = r * x + s * y

    t = 0
    while t < min(rows, cols):
        # choose the non-zero entry of least absolute value in the trailing block
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            row_op(t, i, 0, 1, 1, 0)
        if j != t:
            col_op(t, j, 0, 1, 1, 0)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    if a[i][t] % a[t][t] == 0:
                        row_op(t, i, 1, 0, -(a[i][t] // a[t][t]), 1)
                        continue
                    g, x, y = _xgcd(a[t][t], a[i][t])
                    u, v = a[t][t] // g, a[i][t] // g
                    row_op(t, i, x, y, -v, u)
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    if a[t][j] % a[t][t] == 0:
                        col_op(t, j, 1, 0, -(a[t][j] // a[t][t]), 1)
                        continue
                    g, x, y = _xgcd(a[t][t], a[t][j])
                    u, v = a[t][t] // g, a[t][j] // g
                    col_op(t, j, x, y, -v, u)
                    done = False
            if any(a[i][t] != 0 for i in range(t + 1, rows)):
                continue
            if done:
                break
        # divisibility: fold any entry not divisible by the pivot into row t
        d = a[t][t]
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % d != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_op(t, bad, 1, 1, 0, 1)
            continue
        if d < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1

    diag = tuple(a[i][i] for i in range(min(rows, cols)))
    return SNFResult(diag, IntMatrix.from_rows(left, rows), IntMatrix.from_rows(right, cols))


def invariant_factors(m) -> tuple[int, ...]:
    """Invariant factors of coker(m): non-unit diagonal entries, 0 for each free Z."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    out = [d for d in snf.diagonal if d != 1]
    out.extend([0] * (m.rows - len(snf.diagonal)))
    return tuple(sorted((d for d in out if d != 0))) + tuple(d for d in out if d == 0)


def hermite_basis(vectors: Iterable[Sequence[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    """Row Hermite normal form basis of the lattice spanned by ``vectors``.

    The result depends only on the lattice, not on the spanning set.
    """
    rows = [list(v) for v in vectors if any(v)]
    for r in rows:
        if len(r) != dim:
            raise DimensionMismatch("vector length differs from dim")
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        nz = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not nz:
            col += 1
            continue
        piv = nz[0]
        for r in nz[1:]:
            g, x, y = _xgcd(piv[col], r[col])
            u, v = piv[col] // g, r[col] // g
            new_piv = [x * p + y * q for p, q in zip(piv, r)]
            other = [-v * p + u * q for p, q in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    # reduce entries above pivots
    for k, b in enumerate(basis):
        pc = next(i for i, x in enumerate(b) if x)
        for j in range(k):
            q = basis[j][pc] // b[pc]
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], b)]
    return tuple(tuple(b) for b in basis)


def kernel_basis(m) -> tuple[tuple[int, ...], ...]:
    """Hermite-normalized basis of the integer kernel {x : m x = 0}."""
    m = as_matrix(m)
    if m.rows == 0:
        return tuple(tuple(int(i == j) for j in range(m.cols)) for i in range(m.cols))
    snf = smith_normal_form(m)
    r = snf.rank
    cols = snf.right_transform.transpose().entries[r:]
    return hermite_basis(cols, m.cols)


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def divisibility_split(v: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Split ``v = d * vhat`` with ``d`` the content and ``vhat`` primitive."""
    d = content(v)
    if d == 0:
        raise ZeroVector("the zero vector has no primitive part")
    return d, tuple(int(x) // d for x in v)


def bilinear(u: Sequence[int], q, w: Sequence[int]) -> int:
    q = as_matrix(q)
    if len(u) != q.rows or len(w) != q.cols:
        raise DimensionMismatch(f"vectors of length {len(u)}, {len(w)} against {q.rows}x{q.cols} form")
    return sum(u[i] * q.entries[i][j] * w[j] for i in range(q.rows) for j in range(q.cols) if u[i] and w[j])


def gram(basis: Sequence[Sequence[int]], q) -> IntMatrix:
    return IntMatrix.from_rows([[bilinear(a, q, b) for b in basis] for a in basis], len(basis))


# ---------------------------------------------------------------------------
# Symmetric forms


@dataclass(frozen=True)
class FormClass:
    rank: int
    signature: int
    parity: str  # "even" | "odd"
    unimodular: bool
    definiteness: str  # "positive" | "negative" | "indefinite"
    b_plus: int
    b_minus: int
    nullity: int
    determinant: int

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "signature": self.signature,
            "parity": self.parity,
            "unimodular": self.unimodular,
            "definiteness": self.definiteness,
            "b_plus": self.b_plus,
            "b_minus": self.b_minus,
            "nullity": self.nullity,
            "determinant": self.determinant,
        }

    @classmethod
    def from_dict(cls, d: dict) -> FormClass:
        return cls(**d)


def congruence_pivots(q) -> list[Fraction]:
    """Diagonal of a rational congruence diagonalization of a symmetric matrix.

    Zero pivots are perturbed by replacing e_k with e_k + e_j (or e_k - e_j),
    j the lowest index with a non-zero off-diagonal entry in row k. A row
    that is entirely zero contributes a zero pivot.
    """
    q = as_matrix(q)
    n = q.rows
    a = [[Fraction(x) for x in row] for row in q.entries]
    pivots = []
    for k in range(n):
        if a[k][k] == 0:
            partner = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
            if partner is None:
                pivots.append(Fraction(0))
                continue
            j = partner
            sgn = 1 if 2 * a[k][j] + a[j][j] != 0 else -1
            # basis change e_k <- e_k + sgn*e_j applied on both sides
            for c in range(n):
                a[k][c] += sgn * a[j][c]
            for r in range(n):
                a[r][k] += sgn * a[r][j]
        p = a[k][k]
        pivots.append(p)
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] / p
                # row op then the matching column op; the trailing block
                # becomes the Schur complement, which stays symmetric
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
    return pivots


def classify_form(q) -> FormClass:
    """Rank, signature, parity, unimodularity and definiteness of a symmetric form.

    Degenerate or semi-definite forms are reported as ``"indefinite"``
    (meaning: not definite). The empty form is positive definite vacuously.
    """
    q = as_matrix(q)
    if not q.is_symmetric():
        raise NonSymmetric("intersection form must be symmetric")
    n = q.rows
    pivots = congruence_pivots(q)
    bp = sum(1 for p in pivots if p > 0)
    bm = sum(1 for p in pivots if p < 0)
    null = n - bp - bm
    det = q.det()
    if bp == n:
        definiteness = "positive"
    elif bm == n:
        definiteness = "negative"
    else:
        definiteness = "indefinite"
    parity = "even" if all(q.entries[i][i] % 2 == 0 for i in range(n)) else "odd"
    return FormClass(
        rank=n,
        signature=bp - bm,
        parity=parity,
        unimodular=abs(det) == 1,
        definiteness=definiteness,
        b_plus=bp,
        b_minus=bm,
        nullity=null,
        determinant=det,
    )


def block_diagonal(*blocks) -> IntMatrix:
    blocks = [as_matrix(b) for b in blocks]
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[0] * m for _ in range(n)]
    r = c = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r + i][c + j] = b.entries[i][j]
        r += b.rows
        c += b.cols
    return IntMatrix.from_rows(out, m)
