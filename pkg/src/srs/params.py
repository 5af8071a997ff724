"""SRS parameters, companion matrices and certified contraction data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from mpmath import iv

from . import exact
from .errors import BackendMismatchError, NonReducedError, NotInteriorError, UndecidableError
from .numberfield import QBeta
from .realnum import DEFAULT_MAX_PREC, RealScalar, iv_bounds, ivprec, mpf_to_fraction

RATIONAL, ALGEBRAIC, REAL = "rational", "algebraic", "real"

M_CAP = 48  # largest power index tried for the adapted norm
ENCLOSURE_BITS = 256
DEFAULT_TAIL = Fraction(1, 1000)


def _kind(x) -> str:
    if isinstance(x, (int, Fraction)):
        return RATIONAL
    if isinstance(x, QBeta):
        return ALGEBRAIC
    if isinstance(x, RealScalar):
        return REAL
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


class SrsParameter:
    """The vector r = (r_0, ..., r_{d-1}) together with its arithmetic backend."""

    __slots__ = ("coords", "kind", "field", "_hash")

    def __init__(self, coords: Sequence):
        coords = list(coords)
        if not coords:
            raise ValueError("parameter must have dimension >= 1")
        kinds = {_kind(c) for c in coords}
        if len(kinds) > 1:
            # plain rationals may be lifted into an algebraic field
            if kinds == {RATIONAL, ALGEBRAIC}:
                fld = next(c.field for c in coords if isinstance(c, QBeta))
                coords = [c if isinstance(c, QBeta) else fld.element([c]) for c in coords]
                kinds = {ALGEBRAIC}
            else:
                raise BackendMismatchError(f"mixed scalar backends: {sorted(kinds)}")
        kind = kinds.pop()
        if kind == RATIONAL:
            coords = [Fraction(c) for c in coords]
            self.field = None
        elif kind == ALGEBRAIC:
            fields = {c.field.minpoly for c in coords}
            if len(fields) > 1:
                raise BackendMismatchError("coordinates live in different number fields")
            self.field = coords[0].field
        else:
            self.field = None
        if _is_zero(coords[0]):
            raise NonReducedError("r_0 must be nonzero (parameter not reduced)")
        self.coords = tuple(coords)
        self.kind = kind
        self._hash = hash((kind, self.coords))

    @property
    def d(self) -> int:
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, SrsParameter) and self.kind == other.kind and self.coords == other.coords

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SrsParameter({format_param(self)})"

    def is_exact(self) -> bool:
        return self.kind != REAL

    def zero(self):
        if self.kind == ALGEBRAIC:
            return self.field.zero()
        if self.kind == REAL:
            return RealScalar()
        return Fraction(0)

    def floats(self) -> list[float]:
        return [float(c) for c in self.coords]


def _is_zero(x) -> bool:
    if isinstance(x, QBeta):
        return x.is_zero()
    if isinstance(x, RealScalar):
        return x.is_exact() and x.const == 0
    return x == 0


def format_param(r: SrsParameter) -> str:
    return ",".join(str(c) for c in r.coords)


def parse_param(text: str, precision: int = DEFAULT_MAX_PREC) -> SrsParameter:
    """Parse "p0/q0,p1/q1,...", "pisot:c0,c1,..." or "real:expr,expr,...".

    Plain decimal literals ("0.5") are exact rationals.  The ``real:`` prefix
    selects the certified-interval backend; ``precision`` is its bit cap.
    """
    text = text.strip()
    if text.startswith("pisot:"):
        from .beta import pisot_spec

        coeffs = [int(c) for c in text[len("pisot:"):].split(",")]
        return pisot_spec(coeffs).param
    if text.startswith("real:"):
        parts = text[len("real:"):].split(",")
        return SrsParameter([RealScalar.parse(p, max_prec=precision) for p in parts])
    return SrsParameter([Fraction(p.strip()) for p in text.split(",")])


def to_scalar_like(r: SrsParameter, value):
    if r.kind == ALGEBRAIC:
        return r.field.element([value])
    if r.kind == REAL:
        return RealScalar(const=Fraction(value))
    return Fraction(value)


# -- basic operations -----------------------------------------------------------


def companion_matrix(r: SrsParameter) -> list[list]:
    """M_r: ones on the superdiagonal, last row (-r_0, ..., -r_{d-1})."""
    if not isinstance(r, SrsParameter):
        r = SrsParameter(r)
    d = r.d
    zero, one = r.zero(), r.zero() + 1
    rows = [[one if j == i + 1 else zero for j in range(d)] for i in range(d - 1)]
    rows.append([-c for c in r.coords])
    return rows


def dot(r: SrsParameter, z: Sequence[int]):
    if len(z) != r.d:
        raise ValueError(f"dimension mismatch: r has d={r.d}, z has {len(z)} entries")
    acc = r.zero()
    for c, zi in zip(r.coords, z):
        if zi:
            acc = acc + c * int(zi)
    return acc


def floor_scalar(r: SrsParameter, z: Sequence[int]) -> int:
    """Exact floor of r . z (refines enclosures for non-rational backends)."""
    return math.floor(dot(r, z))


def enclose(x, bits: int = 64) -> tuple[Fraction, Fraction]:
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(x)
    return x.enclosure(bits)


def sign(x) -> int:
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    return x.sign()


def schur_stable(coeffs: Sequence, sgn=sign) -> bool:
    """All roots of sum c_k x^k lie in the open unit disc (Schur-Cohn recursion).

    ``coeffs`` are constant-first real numbers; ``sgn`` is an exact sign
    function for their type.
    """
    c = list(coeffs)
    while len(c) > 1:
        n = len(c) - 1
        if sgn(c[n] * c[n] - c[0] * c[0]) <= 0:
            return False
        c = [c[n] * c[k + 1] - c[0] * c[n - 1 - k] for k in range(n)]
    return True


def charpoly(r: SrsParameter) -> list:
    """Coefficients of X^d + r_{d-1}X^{d-1} + ... + r_0, constant first."""
    return list(r.coords) + [r.zero() + 1]


def _iv_coords(r: SrsParameter, prec: int):
    return [c.interval(prec) if isinstance(c, RealScalar) else iv.mpf(Fraction(c).numerator) / Fraction(c).denominator
            for c in r.coords]


def _iv_sign(x) -> int:
    if x.a > 0:
        return 1
    if x.b < 0:
        return -1
    raise _Unresolved


class _Unresolved(Exception):
    pass


def is_interior_Dd(r: SrsParameter) -> bool:
    """True iff the spectral radius of M_r is < 1 (certified)."""
    if r.kind != REAL:
        return schur_stable(charpoly(r))
    if all(c.is_exact() for c in r.coords):
        return schur_stable([c.const for c in r.coords] + [Fraction(1)])
    cap = max(c.max_prec for c in r.coords)
    prec = 64
    while prec <= cap:
        with ivprec(prec):
            try:
                return schur_stable(_iv_coords(r, prec) + [iv.mpf(1)], _iv_sign)
            except _Unresolved:
                pass
        prec *= 2
    raise UndecidableError(f"spectral radius indistinguishable from 1 at precision cap {cap} bits")


# -- contraction data -----------------------------------------------------------


@dataclass(frozen=True)
class AdaptedNorm:
    """||x|| = max_{0<=k<m} ||Mq^k x||_2 / rho^k for a rational matrix Mq.

    ||Mq^m||_2 <= rho^m is certified exactly, which gives ||Mq x|| <= rho ||x||.
    Also ||x||_inf <= ||x||_2 <= ||x|| <= c_high ||x||_2.
    """

    powers: tuple  # Mq^0 .. Mq^(m-1), rational
    rho: Fraction
    m: int
    c_high: Fraction
    _floats: tuple = field(default=(), compare=False, repr=False)
    _ints: tuple = field(default=(), compare=False, repr=False)

    def int_forms(self):
        """[(N_k, D_k)] with Mq^k / rho^k = N_k / D_k, N_k an integer matrix."""
        if not self._ints:
            forms = []
            for k, p in enumerate(self.powers):
                scaled = [[x / self.rho ** k for x in row] for row in p]
                den = 1
                for row in scaled:
                    for x in row:
                        den = math.lcm(den, x.denominator)
                forms.append(([[int(x * den) for x in row] for row in scaled], den))
            object.__setattr__(self, "_ints", tuple(forms))
        return self._ints

    def norm_sq(self, x: Sequence) -> Fraction:
        """Exact squared norm of a rational vector (integer arithmetic throughout)."""
        xs = [Fraction(c) for c in x]
        den = 1
        for c in xs:
            den = math.lcm(den, c.denominator)
        xi = [int(c * den) for c in xs]
        best_num, best_den = 0, 1
        for nk, dk in self.int_forms():
            s = 0
            for row in nk:
                t = 0
                for a, b in zip(row, xi):
                    t += a * b
                s += t * t
            dd = dk * dk
            if s * best_den > best_num * dd:
                best_num, best_den = s, dd
        return Fraction(best_num, best_den * den * den)

    def norm_upper(self, x: Sequence, bits: int = 64) -> Fraction:
        return exact.sqrt_upper(self.norm_sq(x), bits)

    def norm_lower(self, x: Sequence, bits: int = 64) -> Fraction:
        return exact.sqrt_lower(self.norm_sq(x), bits)

    def le(self, x: Sequence, bound: Fraction) -> bool:
        """Exact test ||x|| <= bound."""
        return self.norm_sq(x) <= bound * bound

    def enclosed_upper(self, mids: Sequence[Fraction], rad: Fraction, bits: int = 64) -> Fraction:
        """Upper bound of ||x|| over all x with |x_i - mids_i| <= rad."""
        d = len(mids)
        extra = self.c_high * exact.sqrt_upper(Fraction(d), bits) * rad if rad else 0
        return self.norm_upper(mids, bits) + extra

    def float_matrices(self):
        import numpy as np

        if not self._floats:
            mats = [np.array([[float(v) for v in row] for row in p]) / float(self.rho) ** k
                    for k, p in enumerate(self.powers)]
            object.__setattr__(self, "_floats", tuple(mats))
        return self._floats

    def norm_float(self, x):
        """Floating-point evaluation (not certified); x may be an (N, d) array."""
        import numpy as np

        x = np.asarray(x, dtype=float)
        vals = [np.linalg.norm(x @ p.T, axis=-1) for p in self.float_matrices()]
        return np.max(vals, axis=0)

    def describe(self) -> dict:
        return {"type": "max_k ||Mq^k x||_2 / rho^k", "m": self.m, "rho": str(self.rho),
                "c_high": str(self.c_high)}


@dataclass(frozen=True)
class ContractionData:
    rho_tilde: Fraction
    norm: AdaptedNorm
    R_bar: Fraction
    c_low: Fraction
    c_high: Fraction
    rho_upper: Fraction
    perturbation: Fraction  # upper bound of ||M_r - Mq||_F
    ed_norm: Fraction  # upper bound of ||e_d||
    tail_tolerance: Fraction

    def epsilon(self, n: int) -> Fraction:
        """Geometric bound rho~^n ||e_d|| / (1 - rho~)."""
        return self.rho_tilde ** n * self.ed_norm / (1 - self.rho_tilde)

    def to_json(self) -> dict:
        return {"rho_tilde": str(self.rho_tilde), "R_bar": str(self.R_bar), "c_low": str(self.c_low),
                "c_high": str(self.c_high), "norm": self.norm.describe()}


def rational_companion(r: SrsParameter, bits: int = ENCLOSURE_BITS):
    """(Mq, ||M_r - Mq||_F upper bound) with Mq rational."""
    if r.kind == RATIONAL:
        return companion_matrix(r), Fraction(0)
    d = r.d
    mids, err2 = [], Fraction(0)
    for c in r.coords:
        lo, hi = enclose(c, bits)
        mids.append((lo + hi) / 2)
        err2 += ((hi - lo) / 2) ** 2
    mq = companion_matrix(SrsParameter(mids))
    return mq, exact.sqrt_upper(err2, bits + 8) if err2 else Fraction(0)


def spectral_upper(mq, steps: int = 40) -> Fraction:
    """Certified dyadic upper bound on the spectral radius of a rational companion matrix."""
    d = len(mq)
    coeffs = [-x for x in mq[-1]] + [Fraction(1)]
    if d == 1:
        return abs(coeffs[0])

    def stable(rho):
        return schur_stable([c * rho ** k for k, c in enumerate(coeffs)])

    lo, hi = Fraction(0), Fraction(1)
    if not stable(hi):
        raise NotInteriorError("spectral radius is not < 1")
    for _ in range(steps):
        mid = (lo + hi) / 2
        if stable(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _power_index(mq, rho: Fraction, cap: int):
    """Smallest m <= cap with rho^(2m) I - (Mq^m)^T Mq^m positive semidefinite.

    Candidates are screened with floating-point spectral norms; only those
    are certified in exact arithmetic.
    """
    import numpy as np

    d = len(mq)
    mf = np.array([[float(x) for x in row] for row in mq])
    rf = float(rho)
    pf = np.eye(d)
    p = exact.identity(d)
    pm = 0
    for m in range(1, cap + 1):
        pf = pf @ mf
        if np.linalg.norm(pf, 2) > rf ** m * (1 - 1e-12):
            continue
        while pm < m:
            p = exact.matmul(p, mq)
            pm += 1
        r2m = rho ** (2 * m)
        g = exact.matmul(exact.transpose(p), p)
        test = [[(r2m if i == j else 0) - g[i][j] for j in range(d)] for i in range(d)]
        if exact.is_psd(test):
            return m
    return None


def _build_norm(mq, rho, m) -> AdaptedNorm:
    d = len(mq)
    powers = [exact.identity(d)]
    for _ in range(m - 1):
        powers.append(exact.matmul(powers[-1], mq))
    c2 = max(exact.frobenius_sq(p) / rho ** (2 * k) for k, p in enumerate(powers))
    return AdaptedNorm(tuple(powers), rho, m, exact.sqrt_upper(c2, 32))


def _vector_mids(v, bits):
    mids, rad = [], Fraction(0)
    for x in v:
        lo, hi = enclose(x, bits)
        mids.append((lo + hi) / 2)
        rad = max(rad, (hi - lo) / 2)
    return mids, rad


@lru_cache(maxsize=256)
def contraction_data(r: SrsParameter, tail_tolerance: Fraction = DEFAULT_TAIL) -> ContractionData:
    """Adapted norm, rho~ and a certified R_bar with R <= R_bar <= R + tail_tolerance."""
    tail_tolerance = Fraction(tail_tolerance)
    if tail_tolerance <= 0:
        raise ValueError("tail tolerance must be positive")
    if not is_interior_Dd(r):
        raise NotInteriorError(f"r = ({format_param(r)}) is not in the interior of D_{r.d}")
    mq, pert = rational_companion(r)
    rho_up = spectral_upper(mq)
    chosen = None
    for j in range(1, 21):
        rho = rho_up + Fraction(1, 1 << j) * (1 - rho_up)
        m = _power_index(mq, rho, M_CAP)
        if m is None:
            break
        chosen = (rho, m)
    if chosen is None:
        raise NotInteriorError("could not certify a contracting norm")
    rho, m = chosen
    norm = _build_norm(mq, rho, m)
    rho_tilde = rho + norm.c_high * pert
    if pert:
        rho_tilde += Fraction(1, 1 << ENCLOSURE_BITS)
    if rho_tilde >= 1:
        raise NotInteriorError("perturbation too large to certify rho~ < 1")
    d = r.d
    e_d = [0] * (d - 1) + [1]
    ed_norm = norm.norm_upper(e_d)

    # R_bar: partial sums of upper bounds plus the geometric tail
    half = tail_tolerance / 2
    n_terms = 1
    while rho_tilde ** n_terms * ed_norm / (1 - rho_tilde) > half:
        n_terms += 1
    bits = max(64, (n_terms * 4).bit_length() + tail_tolerance.denominator.bit_length() + 8)
    mat = companion_matrix(r)
    if r.kind == REAL:
        prec = 2 * bits + 64
        with ivprec(prec):
            ivm = [[_iv_entry(x, prec) for x in row] for row in mat]
    v = [to_scalar_like(r, x) for x in e_d]
    if r.kind == RATIONAL:
        # M^n e_d = V_n / den^n with integer V_n; terms are rounded to 2^-bits
        den = 1
        for row in mat:
            for x in row:
                den = math.lcm(den, x.denominator)
        nmat = [[int(x * den) for x in row] for row in mat]
        vi, scale = list(e_d), 1
        one_ulp = Fraction(1, 1 << bits)
    total = Fraction(0)
    for _ in range(n_terms):
        if r.kind == RATIONAL:
            mids = [Fraction((c << bits) // scale, 1 << bits) for c in vi]
            total += norm.enclosed_upper(mids, one_ulp, bits)
            vi = [sum(a * b for a, b in zip(row, vi)) for row in nmat]
            scale *= den
        elif r.kind == ALGEBRAIC:
            mids, rad = _vector_mids(v, bits + 8)
            total += norm.enclosed_upper(mids, rad, bits)
            v = exact.matvec(mat, v)
        else:
            if not isinstance(v[0], type(iv.mpf(0))):
                v = [iv.mpf(int(Fraction(x.const))) for x in v]
            with ivprec(prec):
                mids, rad = _iv_mids(v)
                total += norm.enclosed_upper(mids, rad, bits)
                v = [sum((a * b for a, b in zip(row, v)), iv.mpf(0)) for row in ivm]
    tail = rho_tilde ** n_terms * ed_norm / (1 - rho_tilde)
    R_bar = total + tail
    return ContractionData(rho_tilde, norm, R_bar, Fraction(1), norm.c_high, rho_up, pert, ed_norm,
                           tail_tolerance)


def _iv_entry(x, prec):
    if isinstance(x, RealScalar):
        return x.interval(prec)
    x = Fraction(x)
    return iv.mpf(x.numerator) / x.denominator


def _iv_mids(v):
    mids, rad = [], Fraction(0)
    for x in v:
        a, b = iv_bounds(x)
        mids.append((a + b) / 2)
        rad = max(rad, (b - a) / 2)
    return mids, rad


def _mpf_frac(x) -> Fraction:
    return mpf_to_fraction(x)
