from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srs.errors import BackendMismatchError, NonReducedError
from srs.params import (
    ALGEBRAIC, RATIONAL, REAL, SrsParameter, companion_matrix, contraction_data, floor_scalar,
    is_interior_Dd, parse_param,
)
from srs.numberfield import field_for
from conftest import EX311, param


def test_companion_matrix_examples():
    assert companion_matrix(param(*EX311)) == [[0, 1], [F(-9, 10), F(11, 20)]]
    assert companion_matrix(param(F(1, 2), F(-1, 2))) == [[0, 1], [F(-1, 2), F(1, 2)]]
    assert companion_matrix(param(F(-2, 3))) == [[F(2, 3)]]


def test_interior_examples():
    assert is_interior_Dd(param(*EX311))
    assert is_interior_Dd(param(F(3, 4), 1))
    assert not is_interior_Dd(param(1))
    assert not is_interior_Dd(param(1, 2))
    assert is_interior_Dd(param(F(-99, 100)))


def test_interior_matches_eigenvalues():
    rng = np.random.default_rng(5)
    for _ in range(200):
        r0, r1 = (F(int(x), 16) for x in rng.integers(-40, 41, size=2))
        if r0 == 0:
            continue
        rho = max(abs(np.roots([1, float(r1), float(r0)])))
        if abs(rho - 1) < 1e-9:
            continue
        assert is_interior_Dd(param(r0, r1)) == (rho < 1)


def test_parse_backends():
    assert parse_param("1/2,-1/2").kind == RATIONAL
    assert parse_param("0.5").coords == (F(1, 2),)
    assert parse_param("pisot:-1,-1,1").kind == ALGEBRAIC
    r = parse_param("real:pi/4")
    assert r.kind == REAL and r.d == 1
    with pytest.raises(NonReducedError):
        parse_param("0,1/2")


def test_mixed_backends_rejected():
    K = field_for((-1, -1, 1))
    with pytest.raises(BackendMismatchError):
        SrsParameter([K.beta - 1, parse_param("real:pi/4").coords[0]])


def test_floor_example():
    assert floor_scalar(param(*EX311), (-1, -1)) == -1  # floor(-7/20)
    K = field_for((-1, -1, 1))
    assert floor_scalar(SrsParameter([K.beta - 1]), (1,)) == 0  # floor(1/beta)


def test_Rbar_geometric_series():
    tol = F(1, 1000)
    cd = contraction_data(param(F(-2, 3)))
    assert 3 <= cd.R_bar <= 3 + tol
    cd = contraction_data(param(F(1, 2)))
    assert 2 <= cd.R_bar <= 2 + tol


def test_Rbar_dominates_partial_sums():
    r = param(*EX311)
    cd = contraction_data(r)
    m = companion_matrix(r)
    v = [F(0), F(1)]
    partial = F(0)
    for _ in range(51):
        partial += cd.norm.norm_lower(v)
        v = [v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    assert partial <= cd.R_bar


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=2, max_size=2))
def test_norm_contracts(x):
    for coords in (EX311, (F(3, 4), 1), (F(1, 2), F(-1, 2))):
        r = param(*coords)
        cd = contraction_data(r)
        m = companion_matrix(r)
        mx = [x[1], m[1][0] * x[0] + m[1][1] * x[1]]
        assert cd.norm.norm_sq(mx) <= cd.rho_tilde ** 2 * cd.norm.norm_sq(x)
        # the adapted norm dominates the max-norm (c_low = 1)
        assert cd.norm.norm_sq(x) >= max(abs(c) for c in x) ** 2


def test_real_backend_contraction():
    cd = contraction_data(parse_param("real:pi/4"))
    assert cd.rho_tilde < 1
    # rho~ must exceed the true contraction pi/4
    assert cd.rho_tilde > F(785398, 10**6)
