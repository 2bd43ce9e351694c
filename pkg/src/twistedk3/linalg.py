"""Exact linear algebra over Python ints and Fractions.

Row-style Hermite reduction with unimodular tracking, integer kernels,
fraction-free determinants and symmetric inertia.  Sizes in this package
stay at rank <= 24, so the plain Euclidean algorithms are the right tool;
no modular shortcuts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(mat: Sequence[Sequence[int]]) -> IntMatrix:
    if not mat:
        return []
    return [[row[j] for row in mat] for j in range(len(mat[0]))]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a or not b:
        return []
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _row_sub(target: list[int], source: list[int], q: int) -> None:
    if q:
        for j in range(len(target)):
            target[j] -= q * source[j]


def _row_neg(row: list[int]) -> None:
    for j in range(len(row)):
        row[j] = -row[j]


def row_hnf(
    rows: Sequence[Sequence[int]], transform: bool = False
) -> tuple[IntMatrix, Optional[IntMatrix], int]:
    """Row Hermite normal form.

    Returns (H, U, r) with U unimodular (when requested), U*rows == H,
    the first r rows of H a reduced echelon basis of the row space
    (positive pivots, entries above a pivot reduced into [0, pivot)),
    and all later rows zero.
    """
    m = len(rows)
    h = [list(row) for row in rows]
    n = len(h[0]) if m else 0
    u = identity(m) if transform else None
    r = 0
    for col in range(n):
        if r == m:
            break
        if all(h[i][col] == 0 for i in range(r, m)):
            continue
        while True:
            piv = min(
                (i for i in range(r, m) if h[i][col] != 0),
                key=lambda i: abs(h[i][col]),
            )
            h[r], h[piv] = h[piv], h[r]
            if u is not None:
                u[r], u[piv] = u[piv], u[r]
            if h[r][col] < 0:
                _row_neg(h[r])
                if u is not None:
                    _row_neg(u[r])
            clean = True
            for i in range(r + 1, m):
                if h[i][col]:
                    q = h[i][col] // h[r][col]
                    _row_sub(h[i], h[r], q)
                    if u is not None:
                        _row_sub(u[i], u[r], q)
                    if h[i][col]:
                        clean = False
            if clean:
                break
        for i in range(r):
            q = h[i][col] // h[r][col]
            _row_sub(h[i], h[r], q)
            if u is not None:
                _row_sub(u[i], u[r], q)
        r += 1
    return h, u, r


def row_basis(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Canonical (HNF) basis of the integer row span."""
    h, _, r = row_hnf(rows)
    return [h[i] for i in range(r)]


def kernel_basis(mat: Sequence[Sequence[int]], width: Optional[int] = None) -> IntMatrix:
    """Canonical basis of {x in Z^n : mat @ x == 0} (rows of the result).

    The kernel of an integer matrix is saturated by construction.  `width`
    must be given when `mat` has no rows.
    """
    if not mat:
        if width is None:
            raise ValueError("width required for a kernel of an empty matrix")
        return identity(width)
    n = len(mat[0])
    at = transpose(mat)  # n x m
    _, u, r = row_hnf(at, transform=True)
    assert u is not None
    ker = [u[i] for i in range(r, n)]
    return row_basis(ker) if ker else []


def det_bareiss(mat: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
    sign = 1
    prev = 1
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
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inertia(mat: Sequence[Sequence[int | Fraction]]) -> tuple[int, int, int]:
    """Exact inertia (positive, negative, zero) of a symmetric matrix.

    Symmetric congruence reduction over the rationals; the zero-diagonal
    case is handled by the congruent row+column addition trick.
    """
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    pos = neg = zero = 0
    for i in range(n):
        if a[i][i] == 0:
            swap = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if swap is not None:
                a[i], a[swap] = a[swap], a[i]
                for row in a:
                    row[i], row[swap] = row[swap], row[i]
            else:
                off = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if off is None:
                    zero += 1
                    continue
                for k in range(n):
                    a[i][k] += a[off][k]
                for k in range(n):
                    a[k][i] += a[k][off]
        d = a[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        factors = [a[j][i] / d for j in range(i + 1, n)]
        for j in range(i + 1, n):
            t = factors[j - i - 1]
            if t:
                for k in range(n):
                    a[j][k] -= t * a[i][k]
        for j in range(i + 1, n):
            t = factors[j - i - 1]
            if t:
                for k in range(n):
                    a[k][j] -= t * a[k][i]
    return pos, neg, zero


def solve_in_rowspace(
    rows: Sequence[Sequence[int]], target: Sequence[int | Fraction]
) -> Optional[list[Fraction]]:
    """Rational coordinates x with sum_i x_i rows[i] == target, or None.

    Gaussian elimination over Fractions; when `rows` are independent the
    solution is unique.
    """
    k = len(rows)
    if k == 0:
        return [] if all(Fraction(t) == 0 for t in target) else None
    n = len(rows[0])
    # augmented system: n equations in k unknowns
    aug = [[Fraction(rows[j][e]) for j in range(k)] + [Fraction(target[e])] for e in range(n)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(k):
        piv = next((e for e in range(row, n) if aug[e][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        d = aug[row][col]
        aug[row] = [x / d for x in aug[row]]
        for e in range(n):
            if e != row and aug[e][col] != 0:
                f = aug[e][col]
                aug[e] = [x - f * y for x, y in zip(aug[e], aug[row])]
        pivots.append((row, col))
        row += 1
    for e in range(row, n):
        if aug[e][k] != 0:
            return None
    x = [Fraction(0)] * k
    for r, c in pivots:
        x[c] = aug[r][k]
    return x
