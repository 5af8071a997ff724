"""Acceptance criteria 1-15.  Each test records one PASS/FAIL line; the lines
are printed in the pytest terminal summary and when this file is run directly
(python3 tests/test_acceptance.py)."""

import math
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from srs import exact
from srs.beta import conjugacy_check_beta, integral_beta_tile_approx, pisot_spec, route_gap_bound, satisfies_F
from srs.cns import (
    IntPolynomial, PolyElement, cns_digits, conjugacy_check, gaussian_value,
)
from srs.dynamics import decide_finiteness, orbit, tau_preimages
from srs.figures import FIGURES, phash_distance, render_figure
from srs.hausdorff import hausdorff_sq
from srs.params import SrsParameter, companion_matrix, contraction_data
from srs.scan import FINITE, NOT_FINITE, scan_d2, verdict_at
from srs.tiles import set_equation_holds, tile_approx
from srs.tiling import count_bounds_hold, disjoint_classes, find_exclusive, shape_census_experiment

GOLDEN = Path(__file__).parent / "golden"
PHASH_THRESHOLD = 8
RESULTS: dict[int, str] = {}

CYCLE = [(-1, -1), (-1, 1), (1, 2), (2, 1), (1, -1)]


def param(*c):
    return SrsParameter([F(x) for x in c])


@contextmanager
def criterion(num: int, title: str, limit: float):
    """Record PASS/FAIL with elapsed time; exceeding ``limit`` seconds fails."""
    t0 = time.perf_counter()
    note = {}
    try:
        yield note
    except BaseException as exc:
        dt = time.perf_counter() - t0
        first = str(exc).splitlines()[0] if str(exc) else ""
        detail = note.get("detail") or f"{type(exc).__name__}: {first}"
        RESULTS[num] = f"criterion {num:2d} FAIL  {title} ({dt:.1f}s) {detail}".rstrip()
        raise
    dt = time.perf_counter() - t0
    if dt > limit:
        RESULTS[num] = f"criterion {num:2d} FAIL  {title} ({dt:.1f}s > {limit:.0f}s limit)"
        pytest.fail(f"criterion {num} exceeded its time limit: {dt:.1f}s > {limit}s")
    RESULTS[num] = f"criterion {num:2d} PASS  {title} ({dt:.1f}s) {note.get('detail', '')}".rstrip()


def test_c01_cycle():
    with criterion(1, "cycle reproduction", 1.0):
        r = param(F(9, 10), F(-11, 20))
        o = orbit(r, (-1, -1))
        assert o.preperiod_length == 0 and o.cycle == CYCLE
        for i, z in enumerate(CYCLE):
            assert tau_preimages(r, z) == [CYCLE[i - 1]]


def test_c02_finiteness():
    cases = [((F(3, 4), 1), True), ((F(9, 10), F(-11, 20)), False), ((F(1, 2), F(-1, 2)), True),
             ((F(1, 2),), True), ((F(-1, 2),), False)]
    with criterion(2, "finiteness decisions", 50.0) as note:
        times = []
        for coords, expected in cases:
            t0 = time.perf_counter()
            assert decide_finiteness(param(*coords)) is expected, coords
            times.append(time.perf_counter() - t0)
            assert times[-1] < 10.0
        note["detail"] = f"max {max(times):.2f}s per decision"


def test_c03_singleton_tiles():
    with criterion(3, "singleton tiles", 1.0) as note:
        r = param(F(9, 10), F(-11, 20))
        cd = contraction_data(r)
        m = np.array([[0.0, 1.0], [-0.9, 0.55]])
        # ||M^n||_2 <= kappa * sqrt(9/10)^n with kappa the eigenbasis condition number
        _, vecs = np.linalg.eig(m)
        kappa = np.linalg.cond(vecs) * (1 + 1e-9)
        z0 = np.hypot(1, 1)
        c = kappa * max(np.hypot(*z) for z in CYCLE) / z0
        n_star = next(n for n in range(10**4) if math.sqrt(0.9) ** n * z0 * c < 1e-3)
        for n in list(range(0, 40)) + [n_star]:
            t = tile_approx(r, (-1, -1), n)
            assert len(t.points) == 1  # diameter 0
            (p,) = t.points
            (leaf,) = t.leaves
            assert cd.norm.norm_sq(p) <= cd.rho_tilde ** (2 * n) * cd.norm.norm_sq(leaf)
            assert math.hypot(*map(float, p)) <= math.sqrt(0.9) ** n * z0 * c
        assert math.hypot(*map(float, p)) < 1e-3
        note["detail"] = f"bound below 1e-3 from n = {n_star}"


def test_c04_cauchy():
    with criterion(4, "Cauchy bound n <= 12", 60.0):
        for coords in ((F(1, 2), F(-1, 2)), (F(3, 4), 1)):
            r = param(*coords)
            cd = contraction_data(r)
            prev = tile_approx(r, (0, 0), 0).points
            for n in range(0, 13):
                cur = tile_approx(r, (0, 0), n + 1).points
                bound = cd.rho_tilde ** n * cd.ed_norm
                assert hausdorff_sq(prev, cur, cd.norm.norm_sq) <= bound * bound, (coords, n)
                prev = cur


def test_c05_set_equation():
    with criterion(5, "set equation levels 1-8", 60.0):
        for coords in ((F(3, 4), 1), (F(1, 2), F(-1, 2)), (F(9, 10), F(-11, 20))):
            r = param(*coords)
            for n in range(1, 9):
                assert set_equation_holds(r, (0, 0), n), (coords, n)


def test_c06_count_inequalities():
    with criterion(6, "d=1 count inequalities", 10.0):
        for n in range(0, 21):
            assert count_bounds_hold([0], n), n


def test_c07_shape_census():
    with criterion(7, "shape census k = 1..6", 300.0) as note:
        rows = shape_census_experiment(6)
        g = F(3, 2)
        for k, N, bracket in rows:
            assert N is not None
            lo, hi = bracket
            assert g ** -k <= lo <= hi <= 3 * g ** -k, k
        classes = disjoint_classes([b for _, _, b in rows])
        assert classes >= 3
        note["detail"] = f"{classes} disjoint length classes"


def test_c08_cns_conjugacy():
    with criterion(8, "CNS conjugacy", 60.0):
        rng = random.Random(2024)
        for coeffs in ((2, -1, 1), (2, 2, 1), (4, 4, 3), (20, -11, 18)):
            A = IntPolynomial(coeffs)
            for _ in range(200):
                z = (rng.randint(-100, 100), rng.randint(-100, 100))
                assert conjugacy_check(A, z, 30), (coeffs, z)


def test_c09_twin_dragon():
    with criterion(9, "twin dragon digits", 1.0):
        A = IntPolynomial((2, 2, 1))
        digits = cns_digits(A, PolyElement.from_monomial(A, [-1]), 5)
        assert digits == [1, 0, 1, 1, 1]
        assert gaussian_value(digits) == (-1, 0)


def test_c10_beta_conjugacy():
    with criterion(10, "beta conjugacy", 120.0):
        rng = random.Random(99)
        for mp in ((-1, -1, 1), (-1, -1, -1, 1), (1, 0, -3, 1)):
            spec = pisot_spec(mp)
            for _ in range(100):
                z = tuple(rng.randint(-30, 30) for _ in range(spec.d))
                assert conjugacy_check_beta(spec, z, 30), (mp, z)


def test_c11_route_equivalence():
    with criterion(11, "route (a) vs U(M - beta I) route", 120.0) as note:
        worst = {}
        for name, mp in (("cubic", (1, 0, -3, 1)), ("tribonacci", (-1, -1, -1, 1))):
            spec = pisot_spec(mp)
            worst[name] = 0.0
            for n in range(0, 11):
                t = integral_beta_tile_approx(spec, (0,) * spec.d, n)
                worst[name] = max(worst[name], t.deviation())
                # the gap is exactly the image of the digit term, bounded here
                assert t.deviation() <= route_gap_bound(spec, n) * (1 + 1e-9)
        note["detail"] = "max deviation " + ", ".join(f"{k} {v:.3g}" for k, v in worst.items())
        assert max(worst.values()) < 1e-9, note["detail"]


def test_c12_property_F():
    with criterion(12, "property (F)", 30.0):
        assert satisfies_F(pisot_spec((1, 0, -3, 1))) is False
        assert satisfies_F(pisot_spec((-1, -1, 1))) is True
        assert satisfies_F(pisot_spec((-1, -1, -1, 1))) is True


def test_c13_exclusive():
    with criterion(13, "exclusivity certificates", 120.0) as note:
        levels = []
        for coords in ((F(3, 4), 1), (F(1, 2), F(-1, 2))):
            cert = find_exclusive(param(*coords))
            assert cert is not None and cert.witness_set == [(0, 0)]
            levels.append(cert.level)
        note["detail"] = f"levels {levels}"


def test_c14_figures(tmp_path):
    with criterion(14, "figure regressions", 600.0) as note:
        dists = {}
        for name in sorted(FIGURES):
            out = tmp_path / f"{name}.png"
            render_figure(name, out)
            dists[name] = phash_distance(out, GOLDEN / f"{name}.png")
        note["detail"] = "phash " + ", ".join(f"{k}={v}" for k, v in dists.items())
        assert max(dists.values()) <= PHASH_THRESHOLD, dists


def test_c15_scan():
    with criterion(15, "scan-d2 spot checks", 300.0):
        res = scan_d2(F(1, 20))
        assert verdict_at(res, F(1, 2), F(-1, 2)) == FINITE
        assert verdict_at(res, F(9, 10), F(-11, 20)) == NOT_FINITE
        assert verdict_at(res, F(3, 4), 1) == FINITE


def report_lines() -> list[str]:
    return [RESULTS.get(k, f"criterion {k:2d} NOT RUN") for k in range(1, 16)]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
