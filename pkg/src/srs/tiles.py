"""SRS tile approximations M^n tau^{-n}(x) with certified Hausdorff error."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import exact
from .dynamics import as_vec, ball_points, tau_preimages
from .errors import PointCapExceeded
from .params import ALGEBRAIC, RATIONAL, REAL, SrsParameter, companion_matrix, contraction_data, enclose
from .realnum import iv_bounds, ivprec

POINT_CAP = 5 * 10**6
ENCLOSE_BITS = 128


class Membership(enum.Enum):
    DEFINITELY_OUTSIDE = "DefinitelyOutside"
    UNDETERMINED = "Undetermined"


@dataclass
class TileApprox:
    r: SrsParameter
    center: tuple
    level: int
    leaves: list  # tau^{-n}(center), sorted
    points: list  # rational coordinates of M^n z (exact for rational r)
    point_radius: Fraction  # coordinate-wise enclosure radius (0 when exact)
    error_bound: Fraction  # certified Hausdorff bound in the adapted norm
    _array: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.leaves)

    def array(self) -> np.ndarray:
        if self._array is None:
            self._array = np.array([[float(c) for c in p] for p in self.points], dtype=float)
        return self._array

    def exact_points(self) -> list:
        """M^n z in the parameter's exact scalar type."""
        if self.r.kind == REAL:
            raise TypeError("exact points are not available for the interval backend")
        mn = exact.matpow(companion_matrix(self.r), self.level)
        return [tuple(exact.matvec(mn, z)) for z in self.leaves]

    def to_json(self) -> dict:
        return {"center": list(self.center), "level": self.level, "error_bound": str(self.error_bound),
                "point_radius": str(self.point_radius),
                "points": [[str(c) for c in p] for p in self.points]}


def expand_preimages(r: SrsParameter, x: Sequence[int], n: int, point_cap: int = POINT_CAP) -> list:
    """tau^{-n}(x), breadth first, lexicographically sorted."""
    frontier = [as_vec(x)]
    for _ in range(n):
        nxt = []
        for y in frontier:
            nxt.extend(tau_preimages(r, y))
            if len(nxt) > point_cap:
                raise PointCapExceeded(f"preimage set exceeds the point cap {point_cap}",
                                       cap=point_cap, flag="--cap-points")
        nxt.sort()
        frontier = nxt
    return frontier


def _power_enclosure(r: SrsParameter, n: int, bits: int):
    """(mid, rad): rational matrix and entrywise radius enclosing M_r^n."""
    if r.kind == RATIONAL:
        return exact.matpow(companion_matrix(r), n), Fraction(0)
    if r.kind == ALGEBRAIC:
        mn = exact.matpow(companion_matrix(r), n)
        mid, rad = [], Fraction(0)
        for row in mn:
            mrow = []
            for x in row:
                lo, hi = enclose(x, bits)
                mrow.append((lo + hi) / 2)
                rad = max(rad, (hi - lo) / 2)
            mid.append(mrow)
        return mid, rad
    from mpmath import iv

    prec = bits + 4 * n + 64
    with ivprec(prec):
        m = [[c.interval(prec) if hasattr(c, "interval") else (iv.mpf(c.const.numerator) / c.const.denominator) for c in row]
             for row in companion_matrix(r)]
        d = r.d
        p = [[iv.mpf(1) if i == j else iv.mpf(0) for j in range(d)] for i in range(d)]
        for _ in range(n):
            p = [[sum((p[i][k] * m[k][j] for k in range(d)), iv.mpf(0)) for j in range(d)] for i in range(d)]
        mid, rad = [], Fraction(0)
        for row in p:
            mrow = []
            for x in row:
                lo, hi = iv_bounds(x)
                mrow.append((lo + hi) / 2)
                rad = max(rad, (hi - lo) / 2)
            mid.append(mrow)
    return mid, rad


def points_from_leaves(r: SrsParameter, leaves, n: int, bits: int = ENCLOSE_BITS):
    """Rational points M^n z and the coordinate radius of the enclosure."""
    mid, rad = _power_enclosure(r, n, bits)
    pts = [tuple(exact.matvec(mid, z)) for z in leaves]
    if rad:
        l1 = max(sum(abs(c) for c in z) for z in leaves)
        rad = rad * l1
    return pts, rad


def error_bound(r: SrsParameter, n: int, point_radius: Fraction = Fraction(0)) -> Fraction:
    cd = contraction_data(r)
    eps = cd.epsilon(n)
    if point_radius:
        eps += cd.c_high * exact.sqrt_upper(Fraction(r.d)) * point_radius
    return eps


def tile_approx(r: SrsParameter, x: Sequence[int], n: int, point_cap: int = POINT_CAP) -> TileApprox:
    """Level-n approximation M^n tau^{-n}(x) of T_r(x)."""
    x = as_vec(x)
    leaves = expand_preimages(r, x, n, point_cap)
    pts, rad = points_from_leaves(r, leaves, n)
    return TileApprox(r, x, n, leaves, pts, rad, error_bound(r, n, rad))


@lru_cache(maxsize=512)
def _cached_tile(r, x, n, point_cap=POINT_CAP):
    return tile_approx(r, x, n, point_cap)


def set_equation_children(r: SrsParameter, x: Sequence[int]) -> list:
    """[(y, M_r)] for y in tau^{-1}(x): T_r(x) is the union of M_r T_r(y)."""
    m = companion_matrix(r)
    return [(y, m) for y in tau_preimages(r, x)]


def set_equation_holds(r: SrsParameter, x: Sequence[int], n: int) -> bool:
    """Exact check of tile_approx(x, n) == union of M . tile_approx(y, n-1)."""
    whole = set(tile_approx(r, x, n).exact_points())
    union = set()
    for y, m in set_equation_children(r, x):
        for p in tile_approx(r, y, n - 1).exact_points():
            union.add(tuple(exact.matvec(m, list(p))))
    return whole == union


def _min_dist_sq(approx: TileApprox, t: Sequence, limit: Fraction):
    """Exact min ||t - p||^2 over points within Euclidean reach of ``limit``; None if none."""
    norm = contraction_data(approx.r).norm
    t = [Fraction(c) for c in t]
    arr = approx.array()
    tree = cKDTree(arr)
    reach = math.sqrt(float(limit)) * (1 + 1e-9) + 1e-12
    best = None
    for j in tree.query_ball_point([float(c) for c in t], reach):
        v = norm.norm_sq([a - b for a, b in zip(t, approx.points[j])])
        if best is None or v < best:
            best = v
    return best


def membership(r: SrsParameter, x: Sequence[int], t: Sequence, n: int) -> Membership:
    """Sound one-sided test: DefinitelyOutside iff dist(t, points) > eps_n."""
    approx = _cached_tile(r, as_vec(x), n)
    eps = approx.error_bound
    best = _min_dist_sq(approx, t, eps * eps)
    if best is not None and best <= eps * eps:
        return Membership.UNDETERMINED
    return Membership.DEFINITELY_OUTSIDE


def candidate_tiles_at(r: SrsParameter, t: Sequence, n: int) -> set:
    """Integer x with ||t - x|| <= R_bar that survive the level-n membership filter."""
    cd = contraction_data(r)
    t = [Fraction(c) for c in t]
    base = tuple(round(c) for c in t)
    off = [c - b for c, b in zip(t, base)]
    reach = cd.R_bar + cd.norm.norm_upper(off) + 1
    out = set()
    for x in ball_points(r, base, reach):
        if not cd.norm.le([c - xi for c, xi in zip(t, x)], cd.R_bar):
            continue
        if membership(r, x, t, n) is Membership.UNDETERMINED:
            out.add(x)
    return out


def suggest_level(r: SrsParameter, target_points: int = 10**5) -> int:
    """Depth whose expected point count |r_0|^{-n} stays near ``target_points``."""
    a = abs(float(r.coords[0]))
    if a >= 1:
        return 0
    return max(0, int(math.log(target_points) / -math.log(a)))
