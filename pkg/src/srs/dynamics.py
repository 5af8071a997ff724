"""The SRS map tau_r: iteration, preimages, digits, orbits and the finiteness decision."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import PointCapExceeded, StepCapExceeded
from .params import (
    ALGEBRAIC, RATIONAL, REAL, SrsParameter, companion_matrix, contraction_data, dot, floor_scalar,
)
from . import exact

STEP_CAP = 10**6

IntVec = tuple


def as_vec(z) -> IntVec:
    return tuple(int(x) for x in z)


def tau(r: SrsParameter, z: Sequence[int]) -> IntVec:
    """(z_1, ..., z_{d-1}, -floor(r . z))."""
    z = as_vec(z)
    return z[1:] + (-floor_scalar(r, z),)


def tau_n(r: SrsParameter, z: Sequence[int], n: int) -> IntVec:
    z = as_vec(z)
    for _ in range(n):
        z = tau(r, z)
    return z


def fractional(x):
    return x - math.floor(x)


def tau_preimages(r: SrsParameter, y: Sequence[int]) -> list[IntVec]:
    """All z with tau_r(z) = y, sorted.

    z = (z_0, y_0, ..., y_{d-2}) where r_0 z_0 lies in [a, a+1) with
    a = -y_{d-1} - sum_{i>=1} r_i y_{i-1}.
    """
    y = as_vec(y)
    if len(y) != r.d:
        raise ValueError("dimension mismatch")
    tail = y[:-1]
    c = r.zero()
    for ri, yi in zip(r.coords[1:], tail):
        if yi:
            c = c + ri * yi
    a = -c - y[-1]
    r0 = r.coords[0]
    if r.kind == REAL:
        # float window, then exact floor test on every candidate
        est_lo = float(a) / float(r0)
        est_hi = float(a + 1) / float(r0)
        lo, hi = sorted((est_lo, est_hi))
        cands = range(math.floor(lo) - 2, math.ceil(hi) + 3)
        out = [(k,) + tail for k in cands if floor_scalar(r, (k,) + tail) == -y[-1]]
        return out
    if r.kind == RATIONAL:
        left, right = a / r0, (a + 1) / r0
    else:
        inv = r0.inverse()
        left, right = a * inv, (a + 1) * inv
    if r0 > 0:
        first, last = math.ceil(left), math.ceil(right) - 1
    else:
        first, last = math.floor(right) + 1, math.floor(left)
    return [(k,) + tail for k in range(first, last + 1)]


@dataclass
class SrsOrbit:
    states: list
    preperiod_length: int
    period_length: int

    @property
    def cycle(self) -> list:
        p = self.preperiod_length
        return self.states[p:p + self.period_length]

    def to_json(self):
        return {"states": [list(s) for s in self.states], "preperiod": self.preperiod_length,
                "period": self.period_length, "cycle": [list(s) for s in self.cycle]}


def orbit(r: SrsParameter, z: Sequence[int], step_cap: int = STEP_CAP) -> SrsOrbit:
    """Iterate until a state repeats.  ``states`` holds preperiod + one full period,
    followed by the first repeated state."""
    z = as_vec(z)
    seen = {z: 0}
    states = [z]
    for step in range(1, step_cap + 1):
        z = tau(r, z)
        states.append(z)
        if z in seen:
            pre = seen[z]
            return SrsOrbit(states, pre, step - pre)
        seen[z] = step
    raise StepCapExceeded(
        f"orbit did not close within {step_cap} steps (r may lie outside D_d, or the cap is too small)",
        cap=step_cap, flag="--cap-steps")


@dataclass
class SrsDigits:
    digits: list
    preperiod: Optional[list] = None
    period: Optional[list] = None

    def to_json(self):
        out = {"digits": [str(v) for v in self.digits]}
        if self.period is not None:
            out["preperiod"] = [str(v) for v in self.preperiod]
            out["period"] = [str(v) for v in self.period]
        return out


def srs_digits(r: SrsParameter, z: Sequence[int], n: int, periodic: bool = True,
               step_cap: int = 10**5) -> SrsDigits:
    """v_k = {r . tau^{k-1}(z)} for k = 1..n; exact backends also get the
    eventually periodic description when the orbit closes within ``step_cap``."""
    z = as_vec(z)
    digits = []
    cur = z
    for _ in range(n):
        v = dot(r, cur)
        digits.append(fractional(v))
        cur = cur[1:] + (-math.floor(v),)
    if not periodic or r.kind == REAL:
        return SrsDigits(digits)
    try:
        orb = orbit(r, z, step_cap)
    except StepCapExceeded:
        return SrsDigits(digits)
    ds = [fractional(dot(r, s)) for s in orb.states[:-1]]
    p = orb.preperiod_length
    return SrsDigits(digits, ds[:p], ds[p:])


def expansion_rhs(r: SrsParameter, z: Sequence[int], n: int) -> list:
    """tau^n(z) - sum_{j=1}^n M^{n-j} (0,...,0,v_j): equals M^n z exactly."""
    m = companion_matrix(r)
    digits = srs_digits(r, z, n, periodic=False).digits
    acc = [r.zero()] * r.d
    for v in digits:
        acc = exact.matvec(m, acc)
        acc[-1] = acc[-1] + v
    zn = tau_n(r, z, n)
    return [zi - a for zi, a in zip(zn, acc)]


def reconstruct_backward(r: SrsParameter, z0: Sequence[int], digits: Sequence) -> IntVec:
    """Recover z_{-n} from z_0 and the digits v_0, v_{-1}, ..., v_{-n+1} of the chain.

    tau(z) = M z + (0,...,0,v) with v = {r z}, so z = M^{-1}(tau(z) - v e_d).
    """
    minv = exact.inverse(companion_matrix(r))
    z = list(z0)
    for v in digits:
        w = list(z)
        w[-1] = w[-1] - v
        z = exact.matvec(minv, w)
    out = []
    for x in z:
        fx = Fraction(x) if r.kind == RATIONAL else x.rational_value() if r.kind == ALGEBRAIC else x.const
        if fx.denominator != 1:
            raise ValueError("reconstruction is not integral")
        out.append(int(fx))
    return tuple(out)


# -- lattice balls and periodic points -----------------------------------------


def ball_points(r: SrsParameter, center: Sequence[int] | None = None, radius: Fraction | None = None,
                max_points: int | None = None) -> list[IntVec]:
    """All integer x with ||x - center|| <= radius (adapted norm), sorted.

    The box |x_i - center_i| <= radius is a superset because ||.||_inf <= ||.||.
    Points are screened in floating point and only near-boundary points are
    re-checked exactly.
    """
    cd = contraction_data(r)
    norm = cd.norm
    radius = cd.R_bar if radius is None else Fraction(radius)
    d = r.d
    center = as_vec(center) if center is not None else (0,) * d
    k = math.floor(radius)
    if max_points is not None and (2 * k + 1) ** d > max_points:
        raise PointCapExceeded(f"ball enumeration box has {(2 * k + 1) ** d} points, above the cap {max_points}",
                               cap=max_points, flag="--cap-points")
    axis = np.arange(-k, k + 1, dtype=np.int64)
    grid = np.array(np.meshgrid(*([axis] * d), indexing="ij")).reshape(d, -1).T
    vals = norm.norm_float(grid.astype(float))
    rf = float(radius)
    margin = 1e-9 * max(1.0, rf)
    inside = vals <= rf - margin
    border = np.abs(vals - rf) <= margin
    keep = []
    for idx in np.nonzero(inside | border)[0]:
        off = tuple(int(v) for v in grid[idx])
        if border[idx] and not norm.le(off, radius):
            continue
        keep.append(tuple(c + o for c, o in zip(center, off)))
    keep.sort()
    return keep


@dataclass
class PeriodicReport:
    points: set
    cycles: list  # each cycle as a list of states starting at its smallest state


def periodic_report(r: SrsParameter, step_cap: int = STEP_CAP, max_points: int | None = None) -> PeriodicReport:
    """Orbits of every point in the R_bar ball, with shared memoisation."""
    fate: dict[IntVec, int] = {}
    cycles: list[list] = []
    budget = step_cap
    for start in ball_points(r, max_points=max_points):
        if start in fate:
            continue
        path = []
        pos = {}
        z = start
        while z not in fate and z not in pos:
            pos[z] = len(path)
            path.append(z)
            z = tau(r, z)
            budget -= 1
            if budget < 0:
                raise StepCapExceeded(f"periodic-point search exceeded {step_cap} steps",
                                      cap=step_cap, flag="--cap-steps")
        if z in pos:
            cyc = path[pos[z]:]
            cid = len(cycles)
            k = cyc.index(min(cyc))
            cycles.append(cyc[k:] + cyc[:k])
        else:
            cid = fate[z]
        for s in path:
            fate[s] = cid
    points = set(itertools.chain.from_iterable(cycles))
    cycles.sort(key=lambda c: (len(c), c))
    return PeriodicReport(points, cycles)


def purely_periodic_points(r: SrsParameter, step_cap: int = STEP_CAP, max_points: int | None = None) -> set:
    return periodic_report(r, step_cap, max_points).points


def decide_finiteness(r: SrsParameter, step_cap: int = STEP_CAP, max_points: int | None = None) -> bool:
    """True iff 0 is the only purely periodic point (r interior)."""
    return purely_periodic_points(r, step_cap, max_points) == {(0,) * r.d}


def nonzero_cycle(r: SrsParameter, step_cap: int = STEP_CAP) -> Optional[list]:
    for c in periodic_report(r, step_cap).cycles:
        if c != [(0,) * r.d]:
            return c
    return None
