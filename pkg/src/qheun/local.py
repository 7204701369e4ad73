"""Local analysis at the regular singularities x=0 and x=infinity.

Solutions near 0 take the form x^lambda * sum c_n x^n and near infinity
(1/x)^lambda * sum c_n (1/x)^n.  The exponent lambda solves a quadratic in
tau = q^lambda built from the extremal coefficients of the equation, and
the series coefficients follow from a one-sided linear recurrence.  When
the two exponents differ by a positive integer the recurrence's leading
factor vanishes once; the singularity is apparent (non-logarithmic) iff
the corresponding consistency sum vanishes, in which case the free
coefficient is set to 0 (the canonical representative).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ExponentMismatch, IrregularPoint, NonRealExponent
from .laurent import LaurentPoly
from .numutil import TINY, solve_quadratic
from .operator import QDiffEquation, apply_equation_offset

__all__ = [
    "BasePoint",
    "ExponentPair",
    "ExpansionStatus",
    "LocalExpansion",
    "SingularityReport",
    "classify",
    "exponents",
    "characteristic_residual",
    "frobenius_series",
    "apparency",
    "apparency_residual",
    "residual_profile",
    "residual_profile_relative",
    "singularity_report",
]

#: Default relative tolerance for "a coefficient vanishes" decisions.
VANISH_TOL = 1e-10
#: Tolerance for recognizing integer exponent differences (resonances).
RESONANCE_TOL = 1e-8
#: Maximum admissible characteristic residual for a supplied exponent.
EXPONENT_TOL = 1e-8


class BasePoint(Enum):
    ZERO = "zero"
    INFINITY = "infinity"

    @classmethod
    def parse(cls, text: str) -> "BasePoint":
        key = str(text).strip().lower()
        if key in ("0", "zero"):
            return cls.ZERO
        if key in ("inf", "infty", "infinity", "oo"):
            return cls.INFINITY
        raise ValueError(f"unknown base point {text!r}")


@dataclass(frozen=True)
class ExponentPair:
    """The two characteristic exponents at a point, ordered lambda1 <= lambda2."""

    lambda1: float
    lambda2: float
    difference: float
    resonant: bool


class ExpansionStatus(Enum):
    GENERIC = "generic"
    APPARENT_RESONANCE = "apparent_resonance"
    LOGARITHMIC_NEEDED = "logarithmic_needed"


@dataclass(frozen=True)
class LocalExpansion:
    """Truncated series solution x^lam * sum coeffs[n] x^(+-n) at a base point."""

    point: BasePoint
    lam: float
    coeffs: tuple[float, ...]
    order: int
    status: ExpansionStatus
    resonance_index: int | None = None


@dataclass(frozen=True)
class SingularityReport:
    point: BasePoint
    is_regular: bool
    exponents: ExponentPair | None = None
    apparent: bool | None = None


def _min_degree(poly: LaurentPoly, default: float) -> float:
    d = poly.min_degree()
    return default if d is None else d

def _max_degree(poly: LaurentPoly, default: float) -> float:
    d = poly.max_degree()
    return default if d is None else d


def classify(eq: QDiffEquation, point: BasePoint) -> bool:
    """Degree test for a regular singularity.

    At 0 the minimal degrees must satisfy M = M'' <= M' (u, w and v
    respectively); at infinity the maximal degrees N = N'' >= N'.  A zero
    v imposes no constraint.
    """
    if point is BasePoint.ZERO:
        mu, mw = eq.u.min_degree(), eq.w.min_degree()
        mv = _min_degree(eq.v, math.inf)
        return mu == mw and mu <= mv
    nu, nw = eq.u.max_degree(), eq.w.max_degree()
    nv = _max_degree(eq.v, -math.inf)
    return nu == nw and nu >= nv


def _extremal_triple(eq: QDiffEquation, point: BasePoint) -> tuple[float, float, float]:
    """(u_M, v_M, w_M) at 0, or (u_N, v_N, w_N) at infinity."""
    if point is BasePoint.ZERO:
        k = eq.u.min_degree()
    else:
        k = eq.u.max_degree()
    return eq.u.coefficient(k), eq.v.coefficient(k), eq.w.coefficient(k)


def characteristic_residual(eq: QDiffEquation, point: BasePoint, lam: float) -> float:
    """Relative residual of the characteristic equation at the given exponent."""
    cu, cv, cw = _extremal_triple(eq, point)
    sign = -1.0 if point is BasePoint.ZERO else 1.0
    qlam = eq.q**(sign * lam)
    value = cu * qlam + cv + cw / qlam
    scale = abs(cu * qlam) + abs(cv) + abs(cw / qlam)
    return abs(value) / max(scale, TINY)


def exponents(eq: QDiffEquation, point: BasePoint, resonance_tol: float = RESONANCE_TOL) -> ExponentPair:
    """Solve the characteristic quadratic for the two exponents.

    At 0 the quadratic in tau = q^lambda is w_M tau^2 + v_M tau + u_M = 0;
    at infinity, u_N tau^2 + v_N tau + w_N = 0.  Raises IrregularPoint if
    the degree test fails and NonRealExponent when a root is not a
    positive real (the standing real-exponent assumption fails).
    """
    if not classify(eq, point):
        raise IrregularPoint(f"{point.value} is not a regular singularity of this equation")
    cu, cv, cw = _extremal_triple(eq, point)
    if point is BasePoint.ZERO:
        roots = solve_quadratic(cw, cv, cu)
    else:
        roots = solve_quadratic(cu, cv, cw)
    lams = []
    for r in roots:
        if abs(r.imag) > 1e-12 * abs(r):
            raise NonRealExponent(f"characteristic root {r!r} is not real")
        rr = r.real
        if rr <= 0:
            raise NonRealExponent(f"characteristic root {rr!r} is not positive")
        lams.append(math.log(rr) / math.log(eq.q))
    lam1, lam2 = sorted(lams)
    diff = lam2 - lam1
    resonant = abs(diff - round(diff)) <= resonance_tol
    return ExponentPair(lam1, lam2, diff, resonant)


class _Frame:
    """Recurrence frame at a base point.

    Bundles the coefficient lookups so that the generic recurrence

        sum_{l=0}^{n} psi(n-l, lam+l) c_l = 0

    reads identically at 0 (coefficients indexed M+j upward, factor
    q^(-mu) on u) and at infinity (indexed N-j downward, factor q^(+mu)
    on u).
    """

    def __init__(self, eq: QDiffEquation, point: BasePoint):
        self.eq = eq
        self.point = point
        lo = min(
            eq.u.min_degree(), eq.w.min_degree(), int(_min_degree(eq.v, eq.u.min_degree()))
        )
        hi = max(
            eq.u.max_degree(), eq.w.max_degree(), int(_max_degree(eq.v, eq.u.max_degree()))
        )
        self.span = hi - lo
        if point is BasePoint.ZERO:
            self.anchor = lo
            self.step = 1
            self.sign = -1.0
        else:
            self.anchor = hi
            self.step = -1
            self.sign = 1.0

    def _parts(self, j: int, mu: float) -> tuple[float, float, float]:
        idx = self.anchor + self.step * j
        qmu = self.eq.q**(self.sign * mu)
        return (
            self.eq.u.coefficient(idx) * qmu,
            self.eq.v.coefficient(idx),
            self.eq.w.coefficient(idx) / qmu,
        )

    def psi(self, j: int, mu: float) -> float:
        pu, pv, pw = self._parts(j, mu)
        return pu + pv + pw

    def psi_scale(self, j: int, mu: float) -> float:
        pu, pv, pw = self._parts(j, mu)
        return abs(pu) + abs(pv) + abs(pw)


def _resonance_position(eq, point, lam, resonance_tol) -> int | None:
    """Index n >= 1 at which the recurrence's leading factor vanishes, if any."""
    try:
        pair = exponents(eq, point, resonance_tol)
    except NonRealExponent:
        return None
    m = round(pair.difference)
    if not pair.resonant or m < 1:
        return None
    if abs(lam - pair.lambda1) <= resonance_tol * (1.0 + abs(pair.lambda1)):
        return m
    return None


def frobenius_series(
    eq: QDiffEquation,
    point: BasePoint,
    lam: float,
    order: int,
    vanish_tol: float = VANISH_TOL,
    resonance_tol: float = RESONANCE_TOL,
) -> LocalExpansion:
    """Generate the series solution with exponent lam, c_0 = 1.

    For n >= 1 the coefficient follows from the generic recurrence; at a
    resonance index the consistency sum decides between the apparent case
    (free coefficient set to 0) and truncation with LOGARITHMIC_NEEDED.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    if not classify(eq, point):
        raise IrregularPoint(f"{point.value} is not a regular singularity of this equation")
    if characteristic_residual(eq, point, lam) > EXPONENT_TOL:
        raise ExponentMismatch(
            f"lambda={lam!r} does not satisfy the characteristic equation at {point.value}"
        )
    frame = _Frame(eq, point)
    res_at = _resonance_position(eq, point, lam, resonance_tol)

    coeffs: list[float] = [1.0]
    status = ExpansionStatus.GENERIC
    res_index = None
    for n in range(1, order + 1):
        lead = frame.psi(0, lam + n)
        lead_scale = frame.psi_scale(0, lam + n)
        total = 0.0
        scale = 0.0
        for ell in range(max(0, n - frame.span), n):
            term = frame.psi(n - ell, lam + ell)
            total += term * coeffs[ell]
            scale += frame.psi_scale(n - ell, lam + ell) * abs(coeffs[ell])
        # The guard catches a vanishing leading factor the exponent pair missed.
        if n == res_at or abs(lead) <= 1e-12 * lead_scale:
            res_index = n
            if abs(total) <= vanish_tol * max(scale, TINY):
                coeffs.append(0.0)
                status = ExpansionStatus.APPARENT_RESONANCE
            else:
                status = ExpansionStatus.LOGARITHMIC_NEEDED
                break
        else:
            coeffs.append(-total / lead)
    return LocalExpansion(
        point=point,
        lam=lam,
        coeffs=tuple(coeffs),
        order=len(coeffs) - 1,
        status=status,
        resonance_index=res_index,
    )


def apparency_residual(
    eq: QDiffEquation, point: BasePoint, resonance_tol: float = RESONANCE_TOL
) -> float | None:
    """Relative magnitude of the consistency sum, or None when non-resonant.

    The sum uses the series grown from the smaller exponent up to the
    resonance index; the singularity is apparent iff it vanishes.
    """
    if not classify(eq, point):
        raise IrregularPoint(f"{point.value} is not a regular singularity of this equation")
    pair = exponents(eq, point, resonance_tol)
    m = round(pair.difference)
    if not pair.resonant or m < 1:
        return None
    frame = _Frame(eq, point)
    lam = pair.lambda1
    coeffs = [1.0]
    for n in range(1, m):
        lead = frame.psi(0, lam + n)
        total = sum(
            frame.psi(n - ell, lam + ell) * coeffs[ell]
            for ell in range(max(0, n - frame.span), n)
        )
        coeffs.append(-total / lead)
    total = 0.0
    scale = 0.0
    for ell in range(max(0, m - frame.span), m):
        total += frame.psi(m - ell, lam + ell) * coeffs[ell]
        scale += frame.psi_scale(m - ell, lam + ell) * abs(coeffs[ell])
    return abs(total) / max(scale, TINY)


def apparency(
    eq: QDiffEquation,
    point: BasePoint,
    vanish_tol: float = VANISH_TOL,
    resonance_tol: float = RESONANCE_TOL,
) -> bool | None:
    """True/False apparency decision at a resonant point, None otherwise."""
    residual = apparency_residual(eq, point, resonance_tol)
    if residual is None:
        return None
    return residual <= vanish_tol


def _profile_data(eq: QDiffEquation, expansion: LocalExpansion):
    if expansion.point is BasePoint.ZERO:
        poly = LaurentPoly({n: c for n, c in enumerate(expansion.coeffs)})
        offset = expansion.lam
    else:
        poly = LaurentPoly({-n: c for n, c in enumerate(expansion.coeffs)})
        offset = -expansion.lam
    result = apply_equation_offset(eq, offset, poly)
    lows = [eq.u.min_degree(), eq.w.min_degree()]
    highs = [eq.u.max_degree(), eq.w.max_degree()]
    if not eq.v.is_zero():
        lows.append(eq.v.min_degree())
        highs.append(eq.v.max_degree())
    lo = min(lows) + min(poly.min_degree(), 0)
    hi = max(highs) + max(poly.max_degree(), 0)
    if expansion.point is BasePoint.ZERO:
        orders = range(lo, hi + 1)
    else:
        orders = range(hi, lo - 1, -1)
    return poly, offset, result, list(orders)


def residual_profile(eq: QDiffEquation, expansion: LocalExpansion) -> list[float]:
    """Order-by-order magnitudes of the equation applied to the truncation.

    Reconstructs the truncated solution as an offset Laurent object, applies
    the equation through the brute-force oracle, and reports coefficient
    magnitudes starting from the expansion point's leading order.  For a
    consistent expansion of order N the first N+1 entries vanish.
    """
    _, _, result, orders = _profile_data(eq, expansion)
    if result.is_zero():
        return [0.0]
    return [abs(result.coefficient(k)) for k in orders]


def residual_profile_relative(eq: QDiffEquation, expansion: LocalExpansion) -> list[float]:
    """Residual profile normalized per order by the summed term magnitudes.

    The oracle's internal terms at order n carry q^(+-n) dilation factors
    and coefficients that may grow geometrically, so a meaningful relative
    residual divides each order by the total magnitude of what was summed
    there (the same equation applied with all magnitudes made positive).
    """
    poly, offset, result, orders = _profile_data(eq, expansion)
    q = eq.q
    qlam = q**offset
    scale = (
        (eq.u.absolute() * poly.absolute().dilate(1.0 / q)) * abs(1.0 / qlam)
        + eq.v.absolute() * poly.absolute()
        + (eq.w.absolute() * poly.absolute().dilate(q)) * abs(qlam)
    )
    return [
        abs(result.coefficient(k)) / max(abs(scale.coefficient(k)), TINY) for k in orders
    ]


def singularity_report(eq: QDiffEquation, point: BasePoint) -> SingularityReport:
    """Classification plus exponents and (when resonant) apparency."""
    if not classify(eq, point):
        return SingularityReport(point=point, is_regular=False)
    pair = exponents(eq, point)
    apparent = apparency(eq, point)
    return SingularityReport(point=point, is_regular=True, exponents=pair, apparent=apparent)
