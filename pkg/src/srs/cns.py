"""Canonical number systems and their SRS parameters.

Elements of Z[x]/A are handled in two coordinate systems: monomial
coefficients (p_0, ..., p_{d-1}) and Brunotte coordinates z with
P = sum z_k W_k, W_0 = a_d, W_k = X W_{k-1} + a_{d-k}.  The matrix V maps
Brunotte to monomial coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact
from .dynamics import as_vec, decide_finiteness, fractional, tau, tau_n
from .errors import NotInteriorError, PointCapExceeded
from .params import SrsParameter, dot, is_interior_Dd
from .tiles import POINT_CAP, tile_approx


@dataclass(frozen=True)
class IntPolynomial:
    """a_0 + a_1 x + ... + a_d x^d with a_0 >= 2, a_d != 0 and all roots outside the unit disc."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2:
            raise ValueError("polynomial must have degree >= 1")
        if c[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if c[0] < 2:
            raise ValueError("constant term a_0 must be >= 2")
        if not is_interior_Dd(_param(c)):
            raise NotInteriorError("polynomial is not expanding")

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        return cls(tuple(int(a) for a in text.split(",")))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def a0(self) -> int:
        return self.coeffs[0]

    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __str__(self):
        return ",".join(str(a) for a in self.coeffs)


def _param(c) -> SrsParameter:
    a0 = c[0]
    return SrsParameter([Fraction(a, a0) for a in reversed(c[1:])])


def srs_param_from_poly(A: IntPolynomial) -> SrsParameter:
    """r = (a_d/a_0, a_{d-1}/a_0, ..., a_1/a_0)."""
    return _param(A.coeffs)


def v_matrix(A: IntPolynomial) -> list:
    """Upper triangular V with V[j][k] = a_{d-(k-j)} for k >= j."""
    a, d = A.coeffs, A.degree
    return [[Fraction(a[d - (k - j)]) if k >= j else Fraction(0) for k in range(d)] for j in range(d)]


@dataclass(frozen=True)
class PolyElement:
    """An element of Lambda_A in Brunotte coordinates."""

    A: IntPolynomial
    z: tuple

    @classmethod
    def from_monomial(cls, A: IntPolynomial, coeffs: Sequence[int]) -> "PolyElement":
        p = list(coeffs) + [0] * (A.degree - len(coeffs))
        z = exact.solve(v_matrix(A), [Fraction(x) for x in p])
        if any(c.denominator != 1 for c in z):
            raise ValueError(f"{list(coeffs)} is not in the Brunotte module of A")
        return cls(A, tuple(int(c) for c in z))

    def monomial(self) -> list:
        return [int(c) for c in exact.matvec(v_matrix(self.A), list(self.z))]


def divide_monomial(A: IntPolynomial, p: Sequence[int]) -> tuple[int, list]:
    """One backward division step on monomial coefficients.

    q = floor(p_0 / a_0), b = p_0 - q a_0, D(P) = sum_{j>=1} p_j X^{j-1} - q (a_1 + a_2 X + ... + a_d X^{d-1}).
    """
    a = A.coeffs
    q = p[0] // a[0]
    b = p[0] - q * a[0]
    shifted = list(p[1:]) + [0]
    return b, [s - q * ak for s, ak in zip(shifted, a[1:])]


def backward_divide(A: IntPolynomial, P: PolyElement) -> tuple[int, PolyElement]:
    """(digit, D_A(P)), computed natively in Brunotte coordinates via tau_r."""
    r = srs_param_from_poly(A)
    p0 = sum(zk * ak for zk, ak in zip(P.z, reversed(A.coeffs[1:])))
    b = p0 % A.a0
    return b, PolyElement(A, tau(r, P.z))


def cns_digits(A: IntPolynomial, P: PolyElement, n: int) -> list[int]:
    """First n digits; iterated division and the SRS digit formula must agree."""
    r = srs_param_from_poly(A)
    p = P.monomial()
    div_digits = []
    for _ in range(n):
        b, p = divide_monomial(A, p)
        div_digits.append(b)
    z = P.z
    srs = []
    for _ in range(n):
        v = fractional(dot(r, z)) * A.a0
        assert v.denominator == 1
        srs.append(int(v))
        z = tau(r, z)
    if div_digits != srs:
        raise AssertionError(f"digit formulas disagree: {div_digits} vs {srs}")
    return div_digits


def reconstruct_mod_A(A: IntPolynomial, P: PolyElement, n: int) -> bool:
    """P == sum_{k<n} b_k X^k + X^n D_A^n(P) modulo A, checked by polynomial division."""
    digits = cns_digits(A, P, n)
    p = P.monomial()
    for _ in range(n):
        _, p = divide_monomial(A, p)
    rhs = [0] * (n + A.degree)
    for k, b in enumerate(digits):
        rhs[k] += b
    for j, c in enumerate(p):
        rhs[n + j] += c
    diff = [Fraction(x) for x in rhs]
    for j, c in enumerate(P.monomial()):
        diff[j] -= c
    return _divisible(diff, A.coeffs)


def _divisible(num: list, den: Sequence[int]) -> bool:
    num = list(num)
    d = len(den) - 1
    lead = Fraction(den[-1])
    for top in range(len(num) - 1, d - 1, -1):
        c = num[top] / lead
        if c:
            for j in range(d + 1):
                num[top - d + j] -= c * den[j]
    return all(x == 0 for x in num[:d])


def is_cns(A: IntPolynomial) -> bool:
    return decide_finiteness(srs_param_from_poly(A))


def conjugacy_check(A: IntPolynomial, z: Sequence[int], n: int) -> bool:
    """D_A^n Psi^{-1}(z) == Psi^{-1} tau^n(z), both sides in monomial coordinates."""
    z = as_vec(z)
    r = srs_param_from_poly(A)
    v = v_matrix(A)
    p = [int(c) for c in exact.matvec(v, list(z))]
    cur = z
    for _ in range(n):
        _, p = divide_monomial(A, p)
        cur = tau(r, cur)
        if [Fraction(x) for x in p] != exact.matvec(v, list(cur)):
            return False
    return True


def b_matrices(A: IntPolynomial) -> tuple[list, list]:
    """(B, B^{-1}) with B = V M^{-1} V^{-1}."""
    from .params import companion_matrix

    v = v_matrix(A)
    vi = exact.inverse(v)
    m = companion_matrix(srs_param_from_poly(A))
    binv = exact.matmul(exact.matmul(v, m), vi)
    b = exact.matmul(exact.matmul(v, exact.inverse(m)), vi)
    return b, binv


def self_affine_tile_approx(A: IntPolynomial, n: int, point_cap: int = POINT_CAP) -> list:
    """All sums sum_{i=1}^n B^{-i} (c_i, 0, ..., 0)^t, digit tuples in lexicographic order."""
    if A.a0 ** n > point_cap:
        raise PointCapExceeded(f"a_0^n = {A.a0 ** n} exceeds the point cap {point_cap}",
                               cap=point_cap, flag="--cap-points")
    _, binv = b_matrices(A)
    d = A.degree
    level = [tuple([Fraction(0)] * d)]
    for _ in range(n):
        nxt = []
        for c in range(A.a0):
            for s in level:
                w = list(s)
                w[0] += c
                nxt.append(tuple(exact.matvec(binv, w)))
        level = nxt
    return level


def brunotte_central_points(A: IntPolynomial, n: int) -> list:
    """B^{-n} V Psi(D_A^{-n}(0)), i.e. V M^n tau^{-n}(0)."""
    return brunotte_tile_approx(A, (0,) * A.degree, n)


def brunotte_tile_approx(A: IntPolynomial, z: Sequence[int], n: int, point_cap: int = POINT_CAP) -> list:
    """V . tile_approx(r, z, n).points."""
    r = srs_param_from_poly(A)
    v = v_matrix(A)
    approx = tile_approx(r, z, n, point_cap)
    return [tuple(exact.matvec(v, list(p))) for p in approx.points]


def rational_base_param(p: int, q: int) -> SrsParameter:
    return SrsParameter([Fraction(-q, p)])


def rational_base_digits(p: int, q: int, N: int, n: int) -> list[int]:
    """b_k = {-(q/p) tau^k(-N)} p for k < n, with the exact reconstruction
    N = (1/q) sum b_k (p/q)^k + (p/q)^n (-tau^n(-N)) checked."""
    if not (p > q >= 1 and math.gcd(p, q) == 1):
        raise ValueError("need coprime p > q >= 1")
    r = rational_base_param(p, q)
    z = (-N,)
    digits = []
    for _ in range(n):
        v = fractional(dot(r, z)) * p
        digits.append(int(v))
        z = tau(r, z)
    base = Fraction(p, q)
    total = sum(Fraction(b, q) * base ** k for k, b in enumerate(digits)) + base ** n * (-z[0])
    if total != N:
        raise AssertionError("rational-base reconstruction failed")
    return digits


def gaussian_value(digits: Sequence[int], base: complex = complex(-1, 1)) -> tuple[int, int]:
    """sum b_k base^k in exact Gaussian-integer arithmetic, as (re, im)."""
    br, bi = int(base.real), int(base.imag)
    re, im = 0, 0
    pr, pi = 1, 0
    for b in digits:
        re += b * pr
        im += b * pi
        pr, pi = pr * br - pi * bi, pr * bi + pi * br
    return re, im
