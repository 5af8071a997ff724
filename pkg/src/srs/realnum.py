"""Certified real scalars backed by mpmath interval arithmetic.

A ``RealScalar`` is an integer/rational linear combination of *atoms*.  An
atom is a closed-form real expression (decimal literals, +, -, *, /, integer
powers, sqrt, pi, e) that can be re-evaluated as an interval at any binary
precision.  Linear combinations are all that the SRS map needs (r . z with
integer z); products of general scalars go through interval matrices instead.
"""

from __future__ import annotations

import ast
import math
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import iv

from .errors import FloorAmbiguousError, UndecidableError

DEFAULT_PREC = 53
DEFAULT_MAX_PREC = 4096


@contextmanager
def ivprec(prec: int):
    """Temporarily set the binary working precision of mpmath's interval context."""
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def _raw_to_fraction(raw) -> Fraction:
    sgn, man, exp, _ = raw
    if not man:
        if exp:
            raise UndecidableError("interval endpoint is not finite")
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sgn else v


def mpf_to_fraction(x) -> Fraction:
    """Exact value of a finite mpf.  Interval endpoints must go through iv_bounds:
    converting them with mpf() would round to the mp context precision."""
    return _raw_to_fraction(mpmath.mpf(x)._mpf_)


def iv_bounds(v) -> tuple[Fraction, Fraction]:
    """Exact endpoints of an mpmath interval."""
    a, b = v._mpi_
    return _raw_to_fraction(a), _raw_to_fraction(b)


def _exact_eval(node):
    """Evaluate an expression tree in Fractions; None if not rational."""
    if isinstance(node, ast.Expression):
        return _exact_eval(node.body)
    if isinstance(node, ast.Constant):
        return Fraction(str(node.value)) if isinstance(node.value, float) else Fraction(node.value)
    if isinstance(node, ast.UnaryOp):
        v = _exact_eval(node.operand)
        if v is None:
            return None
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _exact_eval(node.left), _exact_eval(node.right)
        if a is None or b is None:
            return None
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if isinstance(node.op, ast.Pow):
            if b.denominator != 1:
                return None
            return a ** int(b)
    if isinstance(node, ast.Call) and node.func.id == "sqrt":
        v = _exact_eval(node.args[0])
        if v is None or v < 0:
            return None
        n, d = math.isqrt(v.numerator), math.isqrt(v.denominator)
        if n * n == v.numerator and d * d == v.denominator:
            return Fraction(n, d)
        return None
    return None


def _iv_eval(node, src):
    if isinstance(node, ast.Expression):
        return _iv_eval(node.body, src)
    if isinstance(node, ast.Constant):
        # decimal literals are read from source text so that "0.1" means 1/10
        text = ast.get_source_segment(src, node) or repr(node.value)
        fr = Fraction(text)
        return iv.mpf(fr.numerator) / fr.denominator
    if isinstance(node, ast.Name):
        return {"pi": iv.pi, "e": iv.e}[node.id]
    if isinstance(node, ast.UnaryOp):
        v = _iv_eval(node.operand, src)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a, b = _iv_eval(node.left, src), _iv_eval(node.right, src)
        op = node.op
        if isinstance(op, ast.Add):
            return a + b
        if isinstance(op, ast.Sub):
            return a - b
        if isinstance(op, ast.Mult):
            return a * b
        if isinstance(op, ast.Div):
            return a / b
        if isinstance(op, ast.Pow):
            k = _exact_eval(node.right)
            return a ** int(k)
    if isinstance(node, ast.Call):
        return iv.sqrt(_iv_eval(node.args[0], src))
    raise ValueError("unsupported expression")


_ALLOWED = (
    ast.Expression, ast.Constant, ast.UnaryOp, ast.BinOp, ast.Name, ast.Call,
    ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd, ast.Load,
)


@lru_cache(maxsize=1024)
def _parse(text: str):
    tree = ast.parse(text.strip(), mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise ValueError(f"unsupported syntax in real literal {text!r}")
        if isinstance(node, ast.Name) and node.id not in ("pi", "e", "sqrt"):
            raise ValueError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1):
                raise ValueError(f"only sqrt(.) calls are allowed in {text!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ValueError(f"non-numeric constant in {text!r}")
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            k = _exact_eval(node.right)
            if k is None or k.denominator != 1:
                raise ValueError("only integer exponents are allowed")
    return tree


def atom_interval(text: str, prec: int):
    with ivprec(prec):
        v = _iv_eval(_parse(text), text.strip())
    return v


class RealScalar:
    """sum(coeff * atom) + const, with certified interval evaluation."""

    __slots__ = ("terms", "const", "max_prec")

    def __init__(self, terms=(), const=Fraction(0), max_prec: int = DEFAULT_MAX_PREC):
        merged: dict[str, Fraction] = {}
        const = Fraction(const)
        for text, c in terms:
            exact = _exact_eval(_parse(text))
            if exact is not None:
                const += c * exact
            else:
                key = text.strip()
                merged[key] = merged.get(key, Fraction(0)) + Fraction(c)
        self.terms = tuple(sorted((k, v) for k, v in merged.items() if v != 0))
        self.const = const
        self.max_prec = max_prec

    @classmethod
    def parse(cls, text: str, max_prec: int = DEFAULT_MAX_PREC) -> "RealScalar":
        return cls([(text, Fraction(1))], max_prec=max_prec)

    def is_exact(self) -> bool:
        return not self.terms

    def interval(self, prec: int = DEFAULT_PREC):
        with ivprec(prec + 10):
            acc = iv.mpf(self.const.numerator) / self.const.denominator
            for text, c in self.terms:
                acc = acc + atom_interval(text, prec + 10) * (iv.mpf(c.numerator) / c.denominator)
        return acc

    def enclosure(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        if self.is_exact():
            return self.const, self.const
        v = self.interval(max(bits + 16, DEFAULT_PREC))
        return iv_bounds(v)

    # -- arithmetic (linear only) -------------------------------------------

    def _lift(self, other):
        if isinstance(other, RealScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return RealScalar(const=Fraction(other), max_prec=self.max_prec)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RealScalar(self.terms + o.terms, self.const + o.const, max(self.max_prec, o.max_prec))

    __radd__ = __add__

    def __neg__(self):
        return RealScalar(tuple((t, -c) for t, c in self.terms), -self.const, self.max_prec)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            k = Fraction(other)
            return RealScalar(tuple((t, c * k) for t, c in self.terms), self.const * k, self.max_prec)
        if isinstance(other, RealScalar) and other.is_exact():
            return self * other.const
        if isinstance(other, RealScalar) and self.is_exact():
            return other * self.const
        return NotImplemented

    __rmul__ = __mul__

    # -- order ----------------------------------------------------------------

    def sign(self) -> int:
        if self.is_exact():
            return (self.const > 0) - (self.const < 0)
        prec = DEFAULT_PREC
        while prec <= self.max_prec:
            v = self.interval(prec)
            if v.a > 0:
                return 1
            if v.b < 0:
                return -1
            prec *= 2
        raise UndecidableError(f"sign unresolved at precision cap {self.max_prec} bits")

    def __floor__(self) -> int:
        if self.is_exact():
            return math.floor(self.const)
        prec = DEFAULT_PREC
        while prec <= self.max_prec:
            v = self.interval(prec)
            a, b = iv_bounds(v)
            lo, hi = math.floor(a), math.floor(b)
            if lo == hi:
                return lo
            prec *= 2
        raise FloorAmbiguousError(
            f"floor ambiguous at precision cap {self.max_prec} bits (value indistinguishable from an integer)"
        )

    def __ceil__(self):
        return -math.floor(-self)

    def __float__(self):
        if self.is_exact():
            return float(self.const)
        a, b = iv_bounds(self.interval(80))
        return float((a + b) / 2)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.terms == o.terms and self.const == o.const

    def __hash__(self):
        return hash((self.terms, self.const))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"RealScalar({self})"

    def __str__(self):
        parts = [f"{c}*({t})" if c != 1 else t for t, c in self.terms]
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)
