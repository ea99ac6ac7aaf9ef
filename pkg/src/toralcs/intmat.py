"""Exact integer and rational matrix helpers.

Matrices are plain nested lists (or tuples) of Python ints/Fractions so that
intermediate growth never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

IntMatrix = list[list[int]]


def as_int_matrix(m) -> IntMatrix:
    rows = [list(r) for r in m]
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, bool):
                raise TypeError("boolean matrix entries are not integers")
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise TypeError(f"non-integer entry {x}")
                x = x.numerator
            elif isinstance(x, float):
                if not x.is_integer():
                    raise TypeError(f"non-integer entry {x}")
            elif not hasattr(x, "__index__"):
                raise TypeError(f"non-integer entry {x!r}")
            row.append(int(x))
        out.append(row)
    n = len(out)
    if any(len(r) != n for r in out):
        raise ValueError("matrix must be square")
    return out


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def kron(a, b):
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def is_symmetric(a) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def determinant(a) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    m = [list(map(int, r)) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(a) -> list[list[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def adjugate(a) -> IntMatrix:
    """Integer adjugate, so that ``a @ adj = det(a) * I``."""
    n = len(a)
    if n == 0:
        return []
    det = determinant(a)
    if det == 0:
        raise ZeroDivisionError("adjugate of a singular matrix is not computed here")
    inv = rational_inverse(a)
    out = [[det * x for x in row] for row in inv]
    assert all(x.denominator == 1 for row in out for x in row)
    return [[int(x) for x in row] for row in out]


def unimodular_inverse(u) -> IntMatrix:
    inv = rational_inverse(u)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    zero: int

    @property
    def signature(self) -> int:
        return self.positive - self.negative

    @property
    def rank(self) -> int:
        return self.positive + self.negative


def inertia(a: Sequence[Sequence]) -> Inertia:
    """Sylvester inertia of a symmetric rational matrix by exact congruence.

    Pivots on a nonzero diagonal entry when one is available; otherwise a
    transvection ``e_i -> e_i + e_j`` creates the diagonal entry ``2*a_ij``.
    """
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if m[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n)
                         if m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for c in range(n):
                m[i][c] += m[j][c]
            for r in range(n):
                m[r][i] += m[r][j]
            piv = i
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            for row in m:
                row[k], row[piv] = row[piv], row[k]
        p = m[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        factors = [(r, m[r][k] / p) for r in range(k + 1, n) if m[r][k] != 0]
        for r, f in factors:
            m[r] = [x - f * y for x, y in zip(m[r], m[k])]
        for r, f in factors:
            for row in m:
                row[r] -= f * row[k]
        k += 1
    return Inertia(pos, neg, n - pos - neg)


def rank(a) -> int:
    """Rank of a (not necessarily square) rational matrix."""
    m = [[Fraction(x) for x in row] for row in a]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            f = m[i][c] / m[r][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def smith_decomposition(a) -> tuple[IntMatrix, IntMatrix, IntMatrix, list[int]]:
    """Smith normal form of a square integer matrix, singular input allowed.

    Returns ``(u, u_inv, v, diagonal)`` with ``u @ a @ v == diag(diagonal)``,
    ``u`` and ``v`` unimodular and the nonzero diagonal entries positive and
    forming a divisibility chain, zeros last.
    """
    m = [list(map(int, r)) for r in a]
    n = len(m)
    u = identity(n)
    u_inv = identity(n)
    v = identity(n)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]
        for row in u_inv:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        m[dst] = [x + k * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]
        for row in u_inv:
            row[src] -= k * row[dst]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        u[i] = [-x for x in u[i]]
        for row in u_inv:
            row[i] = -row[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, k):
        for row in m:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(n):
        while True:
            nonzero = [(abs(m[i][j]), i, j) for i in range(t, n) for j in range(t, n) if m[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            clean = True
            for i in range(t + 1, n):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // m[t][t]))
                    clean = clean and m[i][t] == 0
            for j in range(t + 1, n):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // m[t][t]))
                    clean = clean and m[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, n) for j in range(t + 1, n)
                        if m[i][j] % m[t][t]), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < n and m[t][t] < 0:
            negate_row(t)
    diag = [m[i][i] for i in range(n)]
    return u, u_inv, v, diag
