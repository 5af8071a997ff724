"""Exclusive-point certificates, covering-degree bounds and the d = 1 interval tiling."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import exact
from .dynamics import as_vec, ball_points, tau, tau_n, tau_preimages
from .params import RATIONAL, SrsParameter, companion_matrix, contraction_data, format_param, parse_param
from .tiles import candidate_tiles_at, expand_preimages, tile_approx


@dataclass
class ExclusivityCertificate:
    r: SrsParameter
    base_point: tuple
    level: int
    witness_set: list
    certified_point: tuple
    R_bar: Fraction

    @property
    def m(self) -> int:
        return len(self.witness_set)

    def to_json(self) -> dict:
        cd = contraction_data(self.r)
        return {
            "r": format_param(self.r),
            "base_point": list(self.base_point),
            "level": self.level,
            "witness_set": [list(w) for w in self.witness_set],
            "m": self.m,
            "certified_point": [str(c) for c in self.certified_point],
            "R_bar": str(self.R_bar),
            "norm": cd.norm.describe(),
        }


def _witness_orbit(r: SrsParameter, z, levels):
    """Yield (n, witness set) for n = 0, 1, ..., applying tau to the set each step."""
    current = set(ball_points(r, z))
    for n in range(levels + 1):
        yield n, current
        current = {tau(r, w) for w in current}


def _make_cert(r, z, n, witnesses):
    mn = exact.matpow(companion_matrix(r), n)
    point = tuple(exact.matvec(mn, list(z)))
    return ExclusivityCertificate(r, as_vec(z), n, sorted(witnesses), point, contraction_data(r).R_bar)


def exclusivity_certificate(r: SrsParameter, z: Sequence[int], n: int) -> ExclusivityCertificate:
    """Witness set {tau^n(z + y) : ||y|| <= R_bar}; M^n z is m-exclusive with m its size."""
    z = as_vec(z)
    witnesses = {tau_n(r, p, n) for p in ball_points(r, z)}
    return _make_cert(r, z, n, witnesses)


def find_exclusive(r: SrsParameter, z: Sequence[int] | None = None, max_level: int = 200,
                   target: int = 1) -> Optional[ExclusivityCertificate]:
    """Smallest level n <= max_level whose witness set at z has at most ``target`` elements."""
    z = as_vec(z) if z is not None else (0,) * r.d
    for n, ws in _witness_orbit(r, z, max_level):
        if len(ws) <= target:
            return _make_cert(r, z, n, ws)
    return None


def verify_certificate(payload: dict) -> bool:
    """Recompute a serialized certificate from scratch and compare."""
    r = parse_param(payload["r"])
    cert = exclusivity_certificate(r, payload["base_point"], int(payload["level"]))
    same_ws = [list(w) for w in cert.witness_set] == [list(w) for w in payload["witness_set"]]
    same_pt = [str(c) for c in cert.certified_point] == list(payload["certified_point"])
    return same_ws and same_pt and cert.m == int(payload["m"])


def translation_stability(r: SrsParameter, z: Sequence[int], n: int, a: Sequence[int]) -> Optional[tuple]:
    """b with tau^n(z+a+y) = tau^n(z+y) + b for every ||y|| <= R_bar, else None."""
    z, a = as_vec(z), as_vec(a)
    b = None
    for p in ball_points(r, z):
        lhs = tau_n(r, [pi + ai for pi, ai in zip(p, a)], n)
        rhs = tau_n(r, p, n)
        diff = tuple(x - y for x, y in zip(lhs, rhs))
        if b is None:
            b = diff
        elif diff != b:
            return None
    return b


def scaled_exclusive(cert: ExclusivityCertificate, k: int) -> tuple:
    """M^k applied to the certified point (again m-exclusive)."""
    mk = exact.matpow(companion_matrix(cert.r), k)
    return tuple(exact.matvec(mk, list(cert.certified_point)))


def covering_degree_bounds(r: SrsParameter, sample_box, n: int, grid: int = 4, max_level: int = 60) -> dict:
    """Certified lower bound (smallest m from certificates over integer z in the box)
    and a heuristic upper bound (largest candidate-tile count over a rational grid)."""
    lows = [math.floor(lo) for lo, _ in sample_box]
    highs = [math.ceil(hi) for _, hi in sample_box]
    best = None
    for z in itertools.product(*[range(lo, hi + 1) for lo, hi in zip(lows, highs)]):
        for _, ws in _witness_orbit(r, z, max_level):
            if best is None or len(ws) < best:
                best = len(ws)
            if len(ws) == 1:
                break
    upper = 0
    axes = []
    for lo, hi in sample_box:
        lo, hi = Fraction(lo), Fraction(hi)
        if grid <= 1 or lo == hi:
            axes.append([lo])
        else:
            axes.append([lo + (hi - lo) * i / (grid - 1) for i in range(grid)])
    for t in itertools.product(*axes):
        upper = max(upper, len(candidate_tiles_at(r, t, n)))
    return {"certified_lower": best, "heuristic_upper": upper,
            "semantics": {"certified_lower": "certified", "heuristic_upper": "heuristic"}}


# -- d = 1 ------------------------------------------------------------------------


@dataclass
class IntervalTile:
    center: int
    lower: tuple  # bracket (lo, hi) for the left endpoint
    upper: tuple  # bracket (lo, hi) for the right endpoint
    level: int
    count: int

    def to_json(self):
        return {"center": self.center, "lower": [str(x) for x in self.lower],
                "upper": [str(x) for x in self.upper], "level": self.level, "count": self.count}


def _one_dim(r):
    if not isinstance(r, SrsParameter):
        r = SrsParameter([Fraction(r)])
    if r.d != 1 or r.kind != RATIONAL:
        raise ValueError("interval tiling needs an exact one-dimensional parameter")
    a = r.coords[0]
    if not (-1 < a < 1) or a == 0:
        raise ValueError("r must lie in (-1, 0) or (0, 1)")
    return r


def interval_tile(r, N: int, n: int) -> IntervalTile:
    r = _one_dim(r)
    approx = tile_approx(r, (N,), n)
    xs = [p[0] for p in approx.points]
    eps = approx.error_bound
    lo, hi = min(xs), max(xs)
    return IntervalTile(N, (lo - eps, lo + eps), (hi - eps, hi + eps), n, len(xs))


def interval_tiling(r, N_range: Sequence[int], n: int) -> dict:
    """Endpoint brackets for T(N), N in N_range, plus the ordering checks."""
    r = _one_dim(r)
    tiles = []
    pts = {}
    for N in N_range:
        approx = tile_approx(r, (N,), n)
        xs = sorted(p[0] for p in approx.points)
        pts[N] = xs
        eps = approx.error_bound
        tiles.append(IntervalTile(N, (xs[0] - eps, xs[0] + eps), (xs[-1] - eps, xs[-1] + eps), n, len(xs)))
    order = sorted(pts, key=lambda N: (pts[N][0], pts[N][-1]))
    no_interleave = all(pts[a][-1] <= pts[b][0] for a, b in zip(order, order[1:]))
    # tau is monotone on Z (reversing for r_0 > 0, preserving for r_0 < 0), and
    # M^n = (-r_0)^n compensates, so tile positions increase with the center
    monotone = order == sorted(pts)
    return {"tiles": tiles, "order": order, "no_interleave": no_interleave, "monotone": monotone}


def length_estimate(r, N: int, n: int) -> Fraction:
    """|r_0|^n #tau^{-n}(N), which converges to the length of T(N)."""
    r = _one_dim(r)
    return abs(r.coords[0]) ** n * len(expand_preimages(r, (N,), n))


def preimage_count_interval(r, I: Sequence[int], n: int) -> int:
    """#tau^{-n}(I) for a set I of integers."""
    r = _one_dim(r)
    return sum(len(expand_preimages(r, (x,), n)) for x in I)


def count_bounds_hold(I: Sequence[int], n: int) -> bool:
    """(#I-1)(3/2)^n + 1 <= #tau^{-n}(I) <= (#I+1)(3/2)^n - 1 for r = -2/3."""
    r = SrsParameter([Fraction(-2, 3)])
    c = preimage_count_interval(r, I, n)
    g = Fraction(3, 2) ** n
    return (len(I) - 1) * g + 1 <= c <= (len(I) + 1) * g - 1


def length_bracket(N: int, n: int) -> tuple:
    """Certified bracket for the length of T_{-2/3}(N) from the level-n fibre.

    tau^{-n}(N) is a run of c consecutive integers, and the count inequalities
    applied to that run give (2/3)^n (c - 1) <= length <= (2/3)^n (c + 1).
    """
    r = SrsParameter([Fraction(-2, 3)])
    fibre = expand_preimages(r, (N,), n)
    c = len(fibre)
    if [z[0] for z in fibre] != list(range(fibre[0][0], fibre[0][0] + c)):
        raise AssertionError("fibre is not a run of consecutive integers")
    g = Fraction(2, 3) ** n
    return g * (c - 1), g * (c + 1)


def _fibre_pattern(r, N: int, k: int) -> bool:
    layer = [(N,)]
    for j in range(1, k + 1):
        layer = [z for y in layer for z in tau_preimages(r, y)]
        if j < k and len(layer) != 1:
            return False
    return len(layer) == 2


def shape_census_experiment(k_max: int, refine: int = 14, search_cap: int = 10**6) -> list:
    """For k = 1..k_max: the N_k of smallest |N| with singleton fibres up to level
    k-1 and two preimages at level k, and a certified length bracket for T(N_k)."""
    r = SrsParameter([Fraction(-2, 3)])
    out = []
    for k in range(1, k_max + 1):
        found = None
        for i in range(2 * search_cap + 1):
            N = (i + 1) // 2 * (1 if i % 2 else -1)
            if _fibre_pattern(r, N, k):
                found = N
                break
        if found is None:
            out.append((k, None, None))
            continue
        lo0, hi0 = length_bracket(found, k)
        lo1, hi1 = length_bracket(found, k + refine)
        out.append((k, found, (max(lo0, lo1), min(hi0, hi1))))
    return out


def disjoint_classes(brackets: Sequence[tuple]) -> int:
    """Size of a largest family of pairwise disjoint closed brackets (greedy by right end)."""
    count, last = 0, None
    for lo, hi in sorted(brackets, key=lambda b: b[1]):
        if last is None or lo > last:
            count += 1
            last = hi
    return count
