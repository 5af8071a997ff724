"""Small exact linear-algebra kit over Fractions (or any exact field type)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = list  # list of rows


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return [[_dot(row, col) for col in cols] for row in a]


def matvec(a: Matrix, v: Sequence) -> list:
    return [_dot(row, v) for row in a]


def _dot(u, v):
    it = iter(zip(u, v))
    x, y = next(it)
    acc = x * y
    for x, y in it:
        acc = acc + x * y
    return acc


def transpose(a: Matrix) -> Matrix:
    return [list(c) for c in zip(*a)]


def matpow(a: Matrix, k: int) -> Matrix:
    n = len(a)
    one = a[0][0] * 0 + 1
    result = identity(n, one, one * 0)
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def solve(a: Matrix, b: Sequence) -> list:
    """Solve a x = b by Gaussian elimination (exact field arithmetic)."""
    n = len(a)
    m = [list(row) + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    one = a[0][0] * 0 + 1
    cols = [solve(a, [one if i == j else one * 0 for i in range(n)]) for j in range(n)]
    return transpose(cols)


def det(a: Matrix):
    n = len(a)
    m = [list(r) for r in a]
    sign = 1
    acc = m[0][0] * 0 + 1
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return acc * 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        acc = acc * m[col][col]
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / m[col][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return acc * sign


def is_psd(a: Matrix) -> bool:
    """Exact positive-semidefiniteness of a symmetric rational matrix.

    Symmetric elimination on a positive diagonal pivot; a zero diagonal
    forces the whole row to vanish.
    """
    m = [list(r) for r in a]
    while m:
        n = len(m)
        if any(m[i][i] < 0 for i in range(n)):
            return False
        piv = next((i for i in range(n) if m[i][i] > 0), None)
        if piv is None:
            return all(x == 0 for row in m for x in row)
        p = m[piv][piv]
        rest = [i for i in range(n) if i != piv]
        m = [[m[i][j] - m[i][piv] * m[piv][j] / p for j in rest] for i in rest]
    return True


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """Dyadic upper bound for sqrt(q), within 2^-bits of the true value."""
    if q < 0:
        raise ValueError("negative")
    if q == 0:
        return Fraction(0)
    scaled = q * (1 << (2 * bits))
    n = math.ceil(scaled)
    s = math.isqrt(n)
    if s * s < n:
        s += 1
    return Fraction(s, 1 << bits)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    if q <= 0:
        return Fraction(0)
    scaled = q * (1 << (2 * bits))
    return Fraction(math.isqrt(math.floor(scaled)), 1 << bits)


def frobenius_sq(a: Matrix) -> Fraction:
    return sum((x * x for row in a for x in row), Fraction(0))
