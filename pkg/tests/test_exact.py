from fractions import Fraction as F

from hypothesis import given, strategies as st

from srs import exact
from srs.hausdorff import directed_sq, hausdorff_float, hausdorff_sq


def test_matpow_matches_repeated_product():
    m = [[F(0), F(1)], [F(-9, 10), F(11, 20)]]
    p = exact.identity(2)
    for k in range(7):
        assert exact.matpow(m, k) == p
        p = exact.matmul(p, m)


def test_inverse_and_det():
    m = [[F(2), F(1)], [F(7), F(4)]]
    assert exact.det(m) == 1
    assert exact.matmul(m, exact.inverse(m)) == exact.identity(2)


def test_psd():
    assert exact.is_psd([[F(2), F(1)], [F(1), F(2)]])
    assert exact.is_psd([[F(1), F(1)], [F(1), F(1)]])
    assert not exact.is_psd([[F(1), F(2)], [F(2), F(1)]])


@given(st.fractions(min_value=0, max_value=10**6))
def test_sqrt_bounds(q):
    lo, hi = exact.sqrt_lower(q), exact.sqrt_upper(q)
    assert lo * lo <= q <= hi * hi
    assert hi - lo <= F(1, 2**60) * max(1, hi)


def test_hausdorff_exact_and_float_agree():
    a = [(F(0), F(0)), (F(1), F(0))]
    b = [(F(0), F(1, 2))]
    sq = lambda v: sum(c * c for c in v)
    assert directed_sq(b, a, sq) == F(1, 4)
    assert directed_sq(a, b, sq) == F(5, 4)
    assert hausdorff_sq(a, b, sq) == F(5, 4)
    assert abs(hausdorff_float(a, b) - (5 / 4) ** 0.5) < 1e-12
