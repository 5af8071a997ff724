"""Exact arithmetic in Q(beta) for a real algebraic number beta > 1.

Elements are stored in the power basis 1, beta, ..., beta^(n-1) as integer
numerators over a common positive denominator.  Signs and floors are decided
by certified fixed-point enclosures of the powers of beta, refined on demand;
an element with non-rational value is never an integer, so refinement always
terminates for it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy

from .errors import UndecidableError

MAX_BITS = 1 << 14


def _horner(coeffs: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class NumberField:
    """Q(beta) where beta is the largest real root of ``minpoly``.

    ``minpoly`` is a list of integer coefficients, constant term first.  The
    polynomial must be irreducible over Q and its largest real root must
    exceed 1.
    """

    def __init__(self, minpoly: Sequence[int]):
        coeffs = [int(c) for c in minpoly]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] < 0:
            coeffs = [-c for c in coeffs]
        self.minpoly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(coeffs)), x, domain="ZZ")
        if not poly.is_irreducible:
            raise ValueError(f"polynomial {poly.as_expr()} is reducible over Q")
        roots = poly.intervals()
        if not roots:
            raise ValueError("polynomial has no real root")
        (a, b), _ = roots[-1]
        lo, hi = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
        self._lo, self._hi = lo, hi
        if lo == hi:
            if lo <= 1:
                raise ValueError("largest real root must exceed 1")
        else:
            # push the lower end above 1 (or prove the root is <= 1)
            while self._lo < 1 < self._hi or self._lo == 1:
                self._bisect()
            if self._hi <= 1:
                raise ValueError("largest real root must exceed 1")
        self._sign_hi = 1 if _horner(self.minpoly, self._hi) > 0 else -1
        self._fixed: dict[int, list[tuple[int, int]]] = {}
        self._reduction = self._reduction_table()

    # -- isolating interval -------------------------------------------------

    def _bisect(self):
        mid = (self._lo + self._hi) / 2
        v = _horner(self.minpoly, mid)
        if v == 0:
            self._lo = self._hi = mid
            return
        s_hi = _horner(self.minpoly, self._hi)
        if (v > 0) == (s_hi > 0):
            self._hi = mid
        else:
            self._lo = mid

    def isolating_interval(self, bits: int = 0) -> tuple[Fraction, Fraction]:
        """Rational interval containing beta and no other root, width <= 2^-bits."""
        eps = Fraction(1, 1 << bits) if bits > 0 else None
        while eps is not None and self._hi - self._lo > eps:
            self._bisect()
        return self._lo, self._hi

    def powers_fixed(self, bits: int) -> list[tuple[int, int]]:
        """Integer bounds lo_k <= beta^k * 2^bits <= hi_k for k < degree."""
        cached = self._fixed.get(bits)
        if cached is not None:
            return cached
        lo, hi = self.isolating_interval(bits + 4 * self.degree + 16)
        scale = 1 << bits
        out = []
        plo, phi = Fraction(1), Fraction(1)
        for _ in range(self.degree):
            out.append((math.floor(plo * scale), math.ceil(phi * scale)))
            plo *= lo
            phi *= hi
        self._fixed[bits] = out
        return out

    def approx(self, dps: int = 30):
        import mpmath

        lo, hi = self.isolating_interval(int(dps * 3.33) + 8)
        with mpmath.workdps(dps + 5):
            return mpmath.mpf(lo.numerator) / lo.denominator

    # -- arithmetic support -------------------------------------------------

    def _reduction_table(self) -> list[list[Fraction]]:
        """Power-basis coordinates of beta^k for k = n .. 2n-2."""
        n = self.degree
        lead = Fraction(self.minpoly[-1])
        # beta^n = -(a_0 + ... + a_{n-1} beta^{n-1}) / a_n
        cur = [-Fraction(c) / lead for c in self.minpoly[:-1]]
        table = [cur]
        for _ in range(n - 2):
            shifted = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            cur = [s + top * t for s, t in zip(shifted, table[0])]
            table.append(cur)
        return table

    def element(self, coeffs: Sequence, den: int = 1) -> "QBeta":
        """Build an element from power-basis coefficients (ints or Fractions)."""
        fr = [Fraction(c) / den for c in coeffs]
        if len(fr) > self.degree:
            return self._reduce(fr)
        fr += [Fraction(0)] * (self.degree - len(fr))
        return QBeta._from_fractions(self, fr)

    def _reduce(self, fr: list[Fraction]) -> "QBeta":
        n = self.degree
        out = list(fr[:n]) + [Fraction(0)] * max(0, n - len(fr))
        for k in range(n, len(fr)):
            c = fr[k]
            if c:
                row = self._reduction[k - n]
                for i in range(n):
                    out[i] += c * row[i]
        return QBeta._from_fractions(self, out)

    @property
    def beta(self) -> "QBeta":
        if self.degree == 1:
            return self.element([Fraction(-self.minpoly[0], self.minpoly[1])])
        return self.element([0, 1])

    def one(self) -> "QBeta":
        return self.element([1])

    def zero(self) -> "QBeta":
        return self.element([0])

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.minpoly == self.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"NumberField(minpoly={list(self.minpoly)})"


@lru_cache(maxsize=64)
def field_for(minpoly: tuple[int, ...]) -> NumberField:
    """Shared field instance per minimal polynomial (keeps the enclosure cache warm)."""
    return NumberField(minpoly)


class QBeta:
    """An element of Q(beta): sum(nums[k] * beta^k) / den."""

    __slots__ = ("field", "nums", "den")

    def __init__(self, field: NumberField, nums: tuple[int, ...], den: int = 1):
        self.field = field
        self.nums = nums
        self.den = den

    @classmethod
    def _from_fractions(cls, field, fr):
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [int(c * den) for c in fr]
        return cls._normalized(field, nums, den)

    @classmethod
    def _normalized(cls, field, nums, den):
        if den < 0:
            nums = [-x for x in nums]
            den = -den
        g = den
        for x in nums:
            g = math.gcd(g, x)
            if g == 1:
                break
        if g > 1:
            nums = [x // g for x in nums]
            den //= g
        return cls(field, tuple(nums), den)

    # -- predicates -----------------------------------------------------------

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def is_zero(self) -> bool:
        return not any(self.nums)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is irrational")
        return Fraction(self.nums[0], self.den)

    def coefficients(self) -> list[Fraction]:
        return [Fraction(x, self.den) for x in self.nums]

    # -- coercion -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QBeta):
            if other.field is not self.field and other.field != self.field:
                raise TypeError("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            fr = Fraction(other)
            nums = [fr.numerator] + [0] * (self.field.degree - 1)
            return QBeta(self.field, tuple(nums), fr.denominator)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.den == self.den:
            return QBeta._normalized(
                self.field, [a + b for a, b in zip(self.nums, o.nums)], self.den
            )
        return QBeta._normalized(
            self.field,
            [a * o.den + b * self.den for a, b in zip(self.nums, o.nums)],
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return QBeta(self.field, tuple(-a for a in self.nums), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QBeta._normalized(self.field, [a * other for a in self.nums], self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_rational():
            return QBeta._normalized(
                self.field, [a * o.nums[0] for a in self.nums], self.den * o.den
            )
        if self.is_rational():
            return o * self
        n = self.field.degree
        conv = [0] * (2 * n - 1)
        for i, a in enumerate(self.nums):
            if a:
                for j, b in enumerate(o.nums):
                    if b:
                        conv[i + j] += a * b
        fr = [Fraction(c, self.den * o.den) for c in conv]
        return self.field._reduce(fr)

    __rmul__ = __mul__

    def inverse(self) -> "QBeta":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(beta)")
        if self.is_rational():
            return self._coerce(1 / self.rational_value())
        # solve self * y = 1 via the multiplication matrix
        n = self.field.degree
        cols = []
        basis_elem = self.field.one()
        b = self.field.beta
        for _ in range(n):
            cols.append((self * basis_elem).coefficients())
            basis_elem = basis_elem * b
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [Fraction(1)] + [Fraction(0)] * (n - 1)
        from .exact import solve

        y = solve(mat, rhs)
        return self.field.element(y)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order ----------------------------------------------------------------

    def enclosure_fixed(self, bits: int) -> tuple[int, int, int]:
        """(lo, hi, scale) with lo/scale <= value <= hi/scale."""
        pw = self.field.powers_fixed(bits)
        lo = hi = 0
        for a, (plo, phi) in zip(self.nums, pw):
            if a > 0:
                lo += a * plo
                hi += a * phi
            elif a < 0:
                lo += a * phi
                hi += a * plo
        return lo, hi, self.den << bits

    def enclosure(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        if self.is_rational():
            v = self.rational_value()
            return v, v
        lo, hi, scale = self.enclosure_fixed(bits + 8)
        return Fraction(lo, scale), Fraction(hi, scale)

    def sign(self) -> int:
        if self.is_rational():
            return (self.nums[0] > 0) - (self.nums[0] < 0)
        bits = 64
        while bits <= MAX_BITS:
            lo, hi, _ = self.enclosure_fixed(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise UndecidableError("sign of irrational element unresolved at precision cap")

    def __floor__(self) -> int:
        if self.is_rational():
            return self.nums[0] // self.den
        bits = 64
        while bits <= MAX_BITS:
            lo, hi, scale = self.enclosure_fixed(bits)
            f_lo, f_hi = lo // scale, hi // scale
            if f_lo == f_hi:
                return f_lo
            bits *= 2
        raise UndecidableError("floor of irrational element unresolved at precision cap")

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def __float__(self) -> float:
        lo, hi = self.enclosure(60)
        return float((lo + hi) / 2)

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QBeta with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        if isinstance(other, QBeta):
            return self.field == other.field and self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.nums[0], self.den))
        return hash((self.field.minpoly, self.nums, self.den))

    def fractional_part(self) -> "QBeta":
        return self - math.floor(self)

    # -- evaluation at conjugates ---------------------------------------------

    def evaluate(self, point):
        """Value of the defining polynomial at ``point`` (any mpmath/complex number)."""
        acc = 0
        for a in reversed(self.nums):
            acc = acc * point + a
        return acc / self.den

    def __repr__(self):
        return f"QBeta({self})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coefficients()):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*b")
            else:
                terms.append(f"{c}*b^{k}")
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        return {"power_basis": [str(c) for c in self.coefficients()]}
