"""Exact square-matrix algebra over Q.

Determinants and inverses use Bareiss fraction-free elimination on an integer
copy of the matrix. Pivots are chosen by smallest p-adic valuation (largest
|.|_p), ties broken by row index.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import Singular
from .operators import Matrix
from .padic import valuation


def _integerize(rows) -> tuple[list[list[int]], list[int]]:
    """Scale each row to integers; returns the integer rows and the row factors."""
    out, factors = [], []
    for row in rows:
        f = math.lcm(*(Fraction(q).denominator for q in row))
        out.append([int(Fraction(q) * f) for q in row])
        factors.append(f)
    return out, factors


def _pivot(a: list[list[int]], k: int, col: int, p: int) -> int | None:
    best, best_v = None, None
    for r in range(k, len(a)):
        if a[r][col] != 0:
            v = valuation(a[r][col], p)
            if best is None or v < best_v:
                best, best_v = r, v
    return best


def _bareiss(a: list[list[int]], ncols_pivot: int, p: int) -> tuple[int, bool]:
    """In-place Bareiss forward elimination; returns (row-swap sign, full rank)."""
    n = len(a)
    width = len(a[0])
    sign, prev = 1, 1
    for k in range(min(n, ncols_pivot)):
        r = _pivot(a, k, k, p)
        if r is None:
            return sign, False
        if r != k:
            a[k], a[r] = a[r], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, width):
                q, rem = divmod(akk * a[i][j] - aik * a[k][j], prev)
                assert rem == 0, "Bareiss division must be exact"
                a[i][j] = q
            a[i][k] = 0
        prev = akk
    return sign, True


def determinant(M: Matrix) -> Fraction:
    a, factors = _integerize(M.rows)
    sign, full = _bareiss(a, M.n, M.p)
    if not full:
        return Fraction(0)
    return Fraction(sign * a[-1][-1], math.prod(factors))


def matrix_inverse(M: Matrix) -> Matrix:
    """Exact inverse; raises ``Singular`` when ``det M = 0``."""
    n = M.n
    a, factors = _integerize(M.rows)
    for i, row in enumerate(a):
        row.extend(int(i == j) for j in range(n))
    _, full = _bareiss(a, n, M.p)
    if not full:
        raise Singular("matrix is singular")
    # a = [U | E] with U = E N upper triangular, so N^{-1} = U^{-1} E
    x = [[Fraction(0)] * n for _ in range(n)]
    for col in range(n):
        for i in range(n - 1, -1, -1):
            s = Fraction(a[i][n + col])
            for j in range(i + 1, n):
                s -= a[i][j] * x[j][col]
            x[i][col] = s / a[i][i]
    # M = F^{-1} N  =>  M^{-1} = N^{-1} F
    inv = Matrix(M.p, [[x[i][j] * factors[j] for j in range(n)] for i in range(n)])
    if inv @ M != Matrix.identity(M.p, n) or M @ inv != Matrix.identity(M.p, n):
        raise AssertionError("inverse check failed")
    return inv


def kernel_vector(M: Matrix) -> list[Fraction] | None:
    """A nonzero ``v`` with ``M v = 0``, or ``None`` if ``M`` is injective."""
    n = M.n
    rows = [list(r) for r in M.rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        rows[r] = [q / lead for q in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    f = free[0]
    v = [Fraction(0)] * n
    v[f] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -rows[i][f]
    return v


def transpose(M: Matrix) -> Matrix:
    return Matrix(M.p, list(zip(*M.rows)))
