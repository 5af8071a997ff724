from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from srs.dynamics import (
    ball_points, decide_finiteness, expansion_rhs, orbit, periodic_report, purely_periodic_points,
    reconstruct_backward, srs_digits, tau, tau_n, tau_preimages,
)
from srs.errors import PointCapExceeded, StepCapExceeded
from srs.numberfield import field_for
from srs.params import SrsParameter, companion_matrix, contraction_data, parse_param
from srs import exact
from conftest import CYCLE_311, EX311, param


def test_cycle_of_example(r311):
    z = (-1, -1)
    seen = [z]
    for _ in range(5):
        z = tau(r311, z)
        seen.append(z)
    assert seen == CYCLE_311 + [(-1, -1)]
    assert tau(param(F(-2, 3)), (-1,)) == (0,)


def test_singleton_preimages_on_cycle(r311):
    for i, z in enumerate(CYCLE_311):
        assert tau_preimages(r311, z) == [CYCLE_311[i - 1]]


def test_preimage_examples():
    r = param(F(-2, 3))
    assert tau_preimages(r, (0,)) == [(-1,), (0,)]
    assert tau_preimages(r, (1,)) == [(1,)]


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(-30, 30), st.integers(-30, 30)))
def test_preimages_are_exact_fibre(y):
    for coords in (EX311, (F(3, 4), 1), (F(1, 2), F(-1, 2))):
        r = param(*coords)
        pre = tau_preimages(r, y)
        assert all(tau(r, z) == y for z in pre)
        # no preimage missed in a window around the returned set
        firsts = [z[0] for z in pre] or [0]
        for k in range(min(firsts) - 3, max(firsts) + 4):
            if tau(r, (k, y[0])) == y:
                assert (k, y[0]) in pre


def test_preimages_algebraic_and_real():
    K = field_for((-1, -1, 1))
    r = SrsParameter([K.beta - 1])
    for y in range(-5, 6):
        pre = tau_preimages(r, (y,))
        assert pre and all(tau(r, z) == (y,) for z in pre)
    rr = parse_param("real:pi/4")
    for y in range(-5, 6):
        pre = tau_preimages(rr, (y,))
        assert all(tau(rr, z) == (y,) for z in pre)


def test_digits_examples(r311):
    d = srs_digits(r311, (-1, -1), 6)
    assert d.digits[0] == F(13, 20)
    assert d.preperiod == [] and len(d.period) == 5
    K = field_for((-1, -1, 1))
    r = SrsParameter([K.beta - 1])
    d = srs_digits(r, (1,), 4, periodic=False)
    assert d.digits[0] == K.beta - 1 and all(v == 0 for v in d.digits[1:])


@settings(max_examples=30, deadline=None)
@given(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), st.integers(0, 12))
def test_expansion_identity(z, n):
    r = param(F(3, 4), 1)
    mn = exact.matpow(companion_matrix(r), n)
    assert expansion_rhs(r, z, n) == exact.matvec(mn, list(z))


def test_backward_reconstruction(r312):
    # walk a backward chain and rebuild its start from the digits
    chain = [(0, 0)]
    for _ in range(6):
        chain.append(tau_preimages(r312, chain[-1])[0])
    vs = [srs_digits(r312, z, 1, periodic=False).digits[0] for z in chain[1:]]
    assert reconstruct_backward(r312, chain[0], vs) == chain[-1]


def test_orbit_examples(r311, r312):
    o = orbit(r311, (-1, -1))
    assert o.preperiod_length == 0 and o.period_length == 5
    assert orbit(r311, (0, 0)).period_length == 1
    o = orbit(r312, (5, -7))
    assert o.cycle == [(0, 0)] and o.preperiod_length == 15


def test_orbit_cap():
    with pytest.raises(StepCapExceeded) as exc:
        orbit(param(1, 2), (1, 1), step_cap=50)
    assert exc.value.flag == "--cap-steps"


def test_ball_contains_exactly_norm_ball(r311):
    cd = contraction_data(r311)
    pts = set(ball_points(r311))
    k = int(cd.R_bar)
    for x in range(-k, k + 1):
        for y in range(-k, k + 1):
            assert ((x, y) in pts) == cd.norm.le((x, y), cd.R_bar)
    with pytest.raises(PointCapExceeded):
        ball_points(r311, max_points=10)


def test_periodic_points(r311, r312):
    pts = purely_periodic_points(r311)
    assert set(CYCLE_311) | {(0, 0)} <= pts
    rep = periodic_report(r311)
    assert sorted(len(c) for c in rep.cycles) == [1, 5, 5, 5]
    assert purely_periodic_points(r312) == {(0, 0)}
    assert purely_periodic_points(param(F(-2, 3))) == {(0,), (1,), (2,)}


@pytest.mark.parametrize("coords, expected", [
    ((F(3, 4), 1), True),
    (EX311, False),
    ((F(1, 2), F(-1, 2)), True),
    ((F(1, 2),), True),
    ((F(-1, 2),), False),
    ((F(-2, 3),), False),
])
def test_finiteness(coords, expected):
    assert decide_finiteness(param(*coords)) is expected


def test_finiteness_d1_family():
    # the finiteness region on the line is [0, 1)
    for k in range(1, 20):
        assert decide_finiteness(param(F(k, 20)))
        assert not decide_finiteness(param(F(-k, 20)))


def test_finiteness_other_backends():
    assert decide_finiteness(parse_param("pisot:-1,-1,1"))
    assert decide_finiteness(parse_param("real:pi/4"))
    assert not decide_finiteness(parse_param("real:-pi/4"))
