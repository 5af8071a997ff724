"""Pisot numbers, the beta-transformation and integral beta-tiles via SRS.

All dynamics run exactly on integer vectors and in Q(beta); conjugates and
the embedding Phi enter only when points are produced for output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from . import exact
from .dynamics import as_vec, decide_finiteness, fractional, tau
from .errors import NotPisotError
from .hausdorff import hausdorff_float
from .numberfield import NumberField, QBeta, field_for
from .params import SrsParameter, companion_matrix, dot, is_interior_Dd
from .tiles import POINT_CAP, expand_preimages

DPS = 40


@dataclass(frozen=True)
class PisotSpec:
    minpoly: tuple  # constant first, monic
    field: NumberField
    beta: QBeta
    conjugates: tuple  # beta_1..beta_d (mpc), real ascending then Im > 0 by argument
    radii: tuple  # certified enclosure radius per conjugate
    n_real: int
    n_pairs: int
    param: SrsParameter

    @property
    def d(self) -> int:
        return self.param.d

    def beta_mp(self):
        lo, hi = self.field.isolating_interval(DPS * 4)
        return mpmath.mpf(lo.numerator) / lo.denominator


def synthetic_division(coeffs: Sequence, root):
    """coeffs (constant first, monic) = (x - root) * quotient; returns (quotient, remainder)."""
    deg = len(coeffs) - 1
    q = [None] * deg
    q[deg - 1] = coeffs[deg]
    for k in range(deg - 1, 0, -1):
        q[k - 1] = coeffs[k] + root * q[k]
    rem = coeffs[0] + root * q[0]
    return q, rem


def _conjugates(minpoly: Sequence[int], dps: int = DPS):
    """Roots other than beta, ordered, with certified radii n|p/p'| (simple roots)."""
    n = len(minpoly) - 1
    with mpmath.workdps(dps + 20):
        roots = mpmath.polyroots(list(reversed(minpoly)), maxsteps=400, extraprec=4 * dps)
        roots = [mpmath.mpc(z) for z in roots]
        dp = [k * c for k, c in enumerate(minpoly)][1:]

        def rad(z):
            pv = mpmath.polyval(list(reversed(minpoly)), z)
            dv = mpmath.polyval(list(reversed(dp)), z)
            return n * abs(pv) / abs(dv)

        tol = mpmath.mpf(10) ** (-dps // 2)
        reals = sorted((z for z in roots if abs(z.imag) < tol), key=lambda z: z.real)
        beta = reals[-1]
        rest_real = [mpmath.mpc(z.real, 0) for z in reals[:-1]]
        upper = sorted((z for z in roots if z.imag >= tol), key=lambda z: mpmath.arg(z))
        conj = rest_real + upper
        radii = [rad(z) for z in conj]
    return beta, conj, radii, len(rest_real), len(upper)


def srs_param_from_minpoly(minpoly: Sequence[int]) -> SrsParameter:
    """r from minpoly = (x - beta)(x^d + r_{d-1} x^{d-1} + ... + r_0), without the Pisot check."""
    fld = field_for(tuple(int(c) for c in minpoly))
    beta = fld.beta
    q, rem = synthetic_division([fld.element([c]) for c in minpoly], beta)
    if not rem.is_zero():
        raise AssertionError("synthetic division left a remainder")
    return SrsParameter(q[:-1] if len(q) > 1 else q)


@lru_cache(maxsize=32)
def _pisot_spec(minpoly: tuple) -> PisotSpec:
    if minpoly[-1] != 1:
        raise ValueError("minimal polynomial must be monic")
    if len(minpoly) < 3:
        raise ValueError("need degree >= 2 (d >= 1)")
    fld = field_for(minpoly)
    beta_num, conj, radii, n_real, n_pairs = _conjugates(minpoly)
    for z, rad in zip(conj, radii):
        if abs(z) + rad >= 1:
            raise NotPisotError(f"conjugate {mpmath.nstr(z, 12)} has modulus >= 1", witness=z)
    r = srs_param_from_minpoly(minpoly)
    if not is_interior_Dd(r):
        raise NotPisotError("derived parameter is not in the interior of D_d")
    return PisotSpec(minpoly, fld, fld.beta, tuple(conj), tuple(radii), n_real, n_pairs, r)


def pisot_spec(minpoly: Sequence[int]) -> PisotSpec:
    return _pisot_spec(tuple(int(c) for c in minpoly))


def srs_param_from_pisot(minpoly: Sequence[int]) -> tuple[PisotSpec, SrsParameter]:
    spec = pisot_spec(minpoly)
    return spec, spec.param


# -- beta-transformation ----------------------------------------------------------


def _check_unit_interval(x: QBeta):
    if x < 0 or x >= 1:
        raise ValueError("x must lie in [0, 1)")


def beta_transform(spec: PisotSpec, x) -> QBeta:
    x = _lift(spec, x)
    _check_unit_interval(x)
    return fractional(spec.beta * x)


def _lift(spec, x) -> QBeta:
    if isinstance(x, QBeta):
        return x
    return spec.field.element([Fraction(x)])


def zbeta_coordinates(spec: PisotSpec, x) -> tuple | None:
    """Integers (z_0..z_{d-1}, k) with x = r . z + k, or None if x is not in Z[beta].

    {r_0, ..., r_{d-1}, 1} is a Z-basis of Z[beta]; the coordinates come from
    an exact linear solve in the power basis.
    """
    x = _lift(spec, x)
    n = spec.field.degree
    basis = [c.coefficients() for c in spec.param.coords] + [spec.field.one().coefficients()]
    mat = [[basis[j][i] for j in range(n)] for i in range(n)]
    sol = exact.solve(mat, x.coefficients())
    if any(c.denominator != 1 for c in sol):
        return None
    return tuple(int(c) for c in sol)


def in_zbeta(spec: PisotSpec, x) -> bool:
    return zbeta_coordinates(spec, x) is not None


def point_for(spec: PisotSpec, x) -> tuple:
    """An integer vector z with {r z} = x, for x in Z[beta] and [0, 1)."""
    coords = zbeta_coordinates(spec, x)
    if coords is None:
        raise ValueError("x is not in Z[beta]")
    return coords[:-1]


def beta_digits(spec: PisotSpec, x, n: int) -> list[int]:
    """b_k = floor(beta T^{k-1} x), cross-checked against b_k = beta v_k - v_{k+1}."""
    x = _lift(spec, x)
    _check_unit_interval(x)
    direct = []
    cur = x
    for _ in range(n):
        y = spec.beta * cur
        b = math.floor(y)
        direct.append(b)
        cur = y - b
    z = point_for(spec, x)
    r = spec.param
    vs = []
    for _ in range(n + 1):
        v = dot(r, z)
        vs.append(fractional(v))
        z = z[1:] + (-math.floor(v),)
    via_srs = []
    for k in range(n):
        w = spec.beta * vs[k] - vs[k + 1]
        if not w.is_rational() or w.rational_value().denominator != 1:
            raise AssertionError("SRS digit formula did not give an integer")
        via_srs.append(int(w.rational_value()))
    if direct != via_srs:
        raise AssertionError(f"digit formulas disagree: {direct} vs {via_srs}")
    return direct


def conjugacy_check_beta(spec: PisotSpec, z: Sequence[int], n: int) -> bool:
    """{r tau^k(z)} == T_beta^k({r z}) exactly for k = 0..n."""
    r = spec.param
    z = as_vec(z)
    x = fractional(dot(r, z))
    for _ in range(n + 1):
        if fractional(dot(r, z)) != x:
            return False
        z = tau(r, z)
        x = fractional(spec.beta * x)
    return True


def satisfies_F(spec: PisotSpec) -> bool:
    return decide_finiteness(spec.param)


# -- embedding and linear maps ----------------------------------------------------


def _split(spec: PisotSpec, values):
    """Real conjugates as-is, complex ones as (Re, Im)."""
    out = []
    for j, v in enumerate(values):
        if j < spec.n_real:
            out.append(mpmath.re(v))
        else:
            out.extend([mpmath.re(v), mpmath.im(v)])
    return out


def phi_embedding(spec: PisotSpec, x, dps: int = DPS) -> tuple[list, mpmath.mpf]:
    """(Phi(x), error radius): conjugates of x in real coordinates."""
    x = _lift(spec, x)
    with mpmath.workdps(dps + 10):
        vals = [x.evaluate(b) for b in spec.conjugates]
        # derivative bound for the enclosure radius of each conjugate
        deriv = QBeta(spec.field, tuple(k * c for k, c in enumerate(x.nums))[1:] + (0,), x.den)
        err = max([abs(deriv.evaluate(b)) * rad * 2 for b, rad in zip(spec.conjugates, spec.radii)] + [0])
        return _split(spec, vals), err + mpmath.mpf(10) ** (-dps)


def _r_numeric(spec: PisotSpec):
    b = spec.beta_mp()
    return [c.evaluate(b) for c in spec.param.coords]


def u_matrix(spec: PisotSpec) -> list:
    """Rows (q^{(j)}, 1) for real beta_j; (Re q, 1) and (Im q, 0) for a complex pair."""
    with mpmath.workdps(DPS + 10):
        r = _r_numeric(spec)
        chi = r + [mpmath.mpf(1)]
        rows = []
        for j, bj in enumerate(spec.conjugates):
            q, _ = synthetic_division(chi, bj)
            row = [mpmath.mpc(c) for c in q]
            if j < spec.n_real:
                rows.append([mpmath.re(c) for c in row])
            else:
                rows.append([mpmath.re(c) for c in row])
                rows.append([mpmath.im(c) for c in row])
    return rows


def lambda_beta_matrix(spec: PisotSpec) -> list:
    """Block diagonal: beta_j for real conjugates, [[Re, -Im], [Im, Re]] per complex pair.

    This is multiplication by beta_j written in (Re, Im) coordinates, so that
    U M_r = Lambda U and Phi(beta x) = Lambda Phi(x).
    """
    d = spec.d
    lam = [[mpmath.mpf(0)] * d for _ in range(d)]
    i = 0
    for j, bj in enumerate(spec.conjugates):
        if j < spec.n_real:
            lam[i][i] = mpmath.re(bj)
            i += 1
        else:
            a, b = mpmath.re(bj), mpmath.im(bj)
            with mpmath.workdps(DPS + 10):
                nb = -b
            lam[i][i], lam[i][i + 1] = a, nb
            lam[i + 1][i], lam[i + 1][i + 1] = b, a
            i += 2
    return lam


def _mp_matvec(m, v):
    return [mpmath.fsum(a * b for a, b in zip(row, v)) for row in m]


def _mp_matmul(a, b):
    cols = list(zip(*b))
    return [[mpmath.fsum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def numeric_companion(spec: PisotSpec):
    r = _r_numeric(spec)
    d = spec.d
    m = [[mpmath.mpf(1) if j == i + 1 else mpmath.mpf(0) for j in range(d)] for i in range(d - 1)]
    m.append([-c for c in r])
    return m


def u_times_m_minus_beta(spec: PisotSpec):
    with mpmath.workdps(DPS + 10):
        m = numeric_companion(spec)
        b = spec.beta_mp()
        mb = [[m[i][j] - (b if i == j else 0) for j in range(spec.d)] for i in range(spec.d)]
        return _mp_matmul(u_matrix(spec), mb)


def left_eigen_residual(spec: PisotSpec):
    """max |(q^{(j)}, 1) M_r - beta_j (q^{(j)}, 1)| over all conjugates (complex rows)."""
    with mpmath.workdps(DPS + 10):
        r = _r_numeric(spec)
        m = numeric_companion(spec)
        worst = mpmath.mpf(0)
        for bj in spec.conjugates:
            q, _ = synthetic_division(r + [mpmath.mpf(1)], bj)
            w = [mpmath.mpc(c) for c in q]
            wm = [mpmath.fsum(w[k] * m[k][j] for k in range(spec.d)) for j in range(spec.d)]
            worst = max([worst] + [abs(a - bj * c) for a, c in zip(wm, w)])
    return worst


# -- integral beta-tiles -----------------------------------------------------------


@dataclass
class BetaTileApprox:
    center: tuple
    level: int
    leaves: list
    route_a: np.ndarray | None
    route_b: np.ndarray | None

    def deviation(self) -> float:
        """Euclidean Hausdorff distance between the two routes."""
        return hausdorff_float(self.route_a, self.route_b)


def route_a_points(spec: PisotSpec, leaves, n: int) -> np.ndarray:
    """Phi(beta^n {r z_{-n}}) over the level-n preimages."""
    r = spec.param
    bn = spec.beta ** n
    out = []
    with mpmath.workdps(DPS):
        for z in leaves:
            x = bn * fractional(dot(r, z))
            out.append([float(v) for v in _split(spec, [x.evaluate(b) for b in spec.conjugates])])
    return np.array(out, dtype=float).reshape(len(leaves), spec.d)


def route_b_points(spec: PisotSpec, leaves, n: int) -> np.ndarray:
    """U (M_r - beta I) M_r^n z_{-n} over the level-n preimages."""
    with mpmath.workdps(DPS):
        m = numeric_companion(spec)
        p = [[mpmath.mpf(1) if i == j else mpmath.mpf(0) for j in range(spec.d)] for i in range(spec.d)]
        for _ in range(n):
            p = _mp_matmul(m, p)
        full = _mp_matmul(u_times_m_minus_beta(spec), p)
        f = np.array([[float(x) for x in row] for row in full], dtype=float)
    leaves_arr = np.array(leaves, dtype=float).reshape(len(leaves), spec.d)
    return leaves_arr @ f.T


def integral_beta_tile_approx(spec: PisotSpec, z: Sequence[int], n: int, route: str = "both",
                              point_cap: int = POINT_CAP) -> BetaTileApprox:
    leaves = expand_preimages(spec.param, as_vec(z), n, point_cap)
    a = route_a_points(spec, leaves, n) if route in ("a", "both") else None
    b = route_b_points(spec, leaves, n) if route in ("b", "both") else None
    return BetaTileApprox(as_vec(z), n, leaves, a, b)


def route_a_identity_points(spec: PisotSpec, leaves, n: int) -> np.ndarray:
    """U M^n (tau(z) - beta z), which route (a) equals exactly."""
    r = spec.param
    with mpmath.workdps(DPS):
        m = numeric_companion(spec)
        u = u_matrix(spec)
        p = u
        for _ in range(n):
            p = _mp_matmul(p, m)
        b = spec.beta_mp()
        out = []
        for z in leaves:
            t = tau(r, z)
            v = [mpmath.mpf(ti) - b * zi for ti, zi in zip(t, z)]
            out.append([float(x) for x in _mp_matvec(p, v)])
    return np.array(out, dtype=float).reshape(len(leaves), spec.d)


def route_gap_bound(spec: PisotSpec, n: int) -> float:
    """sup over digits v in [0,1) of |U M^n e_d v|_2: the pointwise gap between the routes."""
    with mpmath.workdps(DPS):
        m = numeric_companion(spec)
        col = [mpmath.mpf(0)] * (spec.d - 1) + [mpmath.mpf(1)]
        for _ in range(n):
            col = _mp_matvec(m, col)
        v = _mp_matvec(u_matrix(spec), col)
        return float(mpmath.sqrt(mpmath.fsum(x * x for x in v)))
