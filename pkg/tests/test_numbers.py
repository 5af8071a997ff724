import math
from fractions import Fraction as F

import mpmath
import pytest

from srs.errors import FloorAmbiguousError, UndecidableError
from srs.numberfield import NumberField, field_for
from srs.realnum import RealScalar

GOLDEN = (-1, -1, 1)


def test_golden_field_arithmetic():
    K = field_for(GOLDEN)
    b = K.beta
    assert b * b == b + 1
    assert b.inverse() == b - 1
    assert (b - 1) * b == K.one()
    lo, hi = b.enclosure(80)
    # (2x - 1)^2 = 5 at the golden ratio
    assert (2 * lo - 1) ** 2 <= 5 <= (2 * hi - 1) ** 2 and hi - lo < F(1, 2**70)


def test_floor_and_sign():
    K = field_for(GOLDEN)
    b = K.beta
    assert math.floor(b.inverse()) == 0
    assert math.floor(b ** 10) == 122  # beta^10 = 122.99...
    assert math.floor(-b) == -2
    assert (b - 2).sign() == -1
    assert (b ** 2 - b - 1).sign() == 0
    assert (b ** 10).fractional_part() == b ** 10 - 122


def test_field_rejects_reducible():
    with pytest.raises(ValueError):
        NumberField((-1, 0, 1))


def test_tribonacci_inverse():
    K = field_for((-1, -1, -1, 1))
    b = K.beta
    assert b.inverse() == b * b - b - 1


def test_realscalar_exact_and_interval():
    x = RealScalar.parse("1/2 + 1/4")
    assert x.is_exact() and x.const == F(3, 4)
    pi4 = RealScalar.parse("pi/4")
    lo, hi = pi4.enclosure(64)
    with mpmath.workdps(50):
        assert mpmath.mpf(lo.numerator) / lo.denominator < mpmath.pi / 4 < mpmath.mpf(hi.numerator) / hi.denominator
    assert math.floor(pi4 * 4) == 3
    assert (pi4 - RealScalar.parse("0.78")).sign() == 1


def test_realscalar_floor_ambiguity():
    # two different expressions for the same number: an interval never separates them
    x = RealScalar.parse("sqrt(2)", max_prec=256) - RealScalar.parse("sqrt(8)/2", max_prec=256)
    with pytest.raises(UndecidableError):
        x.sign()
    with pytest.raises(FloorAmbiguousError):
        math.floor(x)
