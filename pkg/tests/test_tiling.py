import json
from fractions import Fraction as F

import pytest

from srs import exact
from srs.params import companion_matrix, contraction_data
from srs.tiling import (
    count_bounds_hold, covering_degree_bounds, disjoint_classes, exclusivity_certificate, find_exclusive,
    interval_tiling, length_bracket, length_estimate, preimage_count_interval, scaled_exclusive,
    shape_census_experiment, translation_stability, verify_certificate,
)
from conftest import CYCLE_311, EX311, param


def test_exclusive_examples(r312, rhalf):
    for r in (r312, rhalf, param(F(1, 2))):
        cert = find_exclusive(r)
        assert cert is not None and cert.witness_set == [(0,) * r.d] and cert.m == 1
        assert verify_certificate(json.loads(json.dumps(cert.to_json())))


def test_no_exclusive_at_origin_for_cycle_param(r311):
    assert find_exclusive(r311, max_level=40) is None
    cert = exclusivity_certificate(r311, (0, 0), 30)
    assert (0, 0) in cert.witness_set and any(c in cert.witness_set for c in CYCLE_311)


def test_tampered_certificate_rejected(r312):
    payload = find_exclusive(r312).to_json()
    payload["witness_set"] = [[1, 0]]
    assert not verify_certificate(payload)


def test_translation_stability():
    r = param(F(1, 2))
    assert translation_stability(r, (0,), 3, (0,)) == (0,)
    n = 3
    assert translation_stability(r, (0,), n, (2 ** n * 5,)) is not None
    # one step does not absorb a shift by 1: tau(y + 1) - tau(y) alternates
    assert translation_stability(r, (0,), 1, (1,)) is None


def test_scaled_exclusive(r312):
    cert = find_exclusive(r312)
    assert scaled_exclusive(cert, 0) == cert.certified_point
    assert scaled_exclusive(cert, 1) == (0, 0)
    cert = exclusivity_certificate(r312, (3, 1), 30)
    p = cert.certified_point
    q = scaled_exclusive(cert, 3)
    assert q == tuple(exact.matvec(exact.matpow(companion_matrix(r312), 3), list(p)))
    cd = contraction_data(r312)
    assert cd.norm.norm_sq(q) <= cd.rho_tilde ** 6 * cd.norm.norm_sq(p)


def test_covering_bounds(r312):
    res = covering_degree_bounds(r312, [(0, 0), (0, 0)], 6, grid=1)
    assert res["certified_lower"] == 1
    assert res["semantics"]["heuristic_upper"] == "heuristic"
    res = covering_degree_bounds(param(F(1, 2)), [(F(1, 4), F(1, 4))], 12, grid=1)
    assert res["certified_lower"] == 1 and res["heuristic_upper"] == 1


def test_interval_tiling_d1():
    for a in (F(1, 2), F(-2, 3), F(2, 5)):
        res = interval_tiling(param(a), range(-4, 5), 10)
        assert res["no_interleave"] and res["monotone"]


def test_interval_lengths_half():
    r = param(F(1, 2))
    for N in (-2, 0, 3):
        assert length_estimate(r, N, 12) == 1


def test_preimage_examples_d1():
    r = param(F(-2, 3))
    for N in range(-6, 7, 2):
        assert preimage_count_interval(r, [N], 1) == 2


def test_count_bounds():
    for n in range(0, 14):
        assert count_bounds_hold([0], n)
        assert count_bounds_hold([0, 1, 2], n)


def test_shape_census_small():
    rows = shape_census_experiment(3)
    g = F(3, 2)
    for k, N, (lo, hi) in rows:
        assert g ** -k <= lo <= hi <= 3 * g ** -k
    assert disjoint_classes([b for _, _, b in rows]) == 3


def test_length_bracket_contains_estimate():
    lo, hi = length_bracket(0, 10)
    assert lo <= length_estimate(param(F(-2, 3)), 0, 10) <= hi
