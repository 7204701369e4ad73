"""The q -> 1 limits of the A3 and A2 variants.

Writing q = 1 + eps and scaling the accessory parameter as

    E = 2 * sum_{m<n} t_m t_n + eps * E1 + eps^2 * Etilde,

the variant equations, divided by eps^2, converge to explicit Fuchsian
differential equations: five singularities {0, t1, t2, t3, inf} for the A3
limit and six {0, t1..t4, inf} for the A2 limit.  The x=0 and x=infinity
exponents of the q-equations are independent of q and equal the limit
ODE's indicial roots exactly.

The ODE's accessory coefficient is only determined up to an additive
constant by this scaling ("Btilde = Etilde + const"); the constant is
recovered numerically by matching the first accessory-sensitive series
coefficient at a small calibration eps, then held fixed while the
coefficientwise q-to-ODE differences are measured across the requested
eps values (they decay at first order).

Note on the six-singularity case: the sign of the constant term in the
g-coefficient is pinned by the exact eps^2 Taylor expansion of the
q-equation; that sign is also the only one for which the indicial roots
at x=0 come out as {ltilde, ltilde + 1}, matching the q-side exponents,
which are independent of q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    CoincidentSingularities,
    ExponentMismatch,
    InvalidParams,
    IrregularPoint,
    ResonantLogarithmic,
)
from .laurent import LaurentPoly
from .local import BasePoint, ExpansionStatus, exponents, frobenius_series
from .numutil import TINY, loglog_slope, solve_quadratic
from .operator import build_equation
from .params import Family, ModelParams

__all__ = [
    "LimitFamily",
    "FuchsianODE",
    "HeunForm",
    "limit_ode",
    "indicial_exponents",
    "ode_frobenius",
    "to_heun_form",
    "verify_limit",
    "LimitReport",
]

#: Tolerance for recognizing a vanishing indicial leading factor.
ODE_RESONANCE_TOL = 1e-8
#: Tolerance on the supplied exponent's indicial residual.
ODE_EXPONENT_TOL = 1e-8


class LimitFamily(Enum):
    FROM_A3 = "fromA3"
    FROM_A2 = "fromA2"

    @classmethod
    def parse(cls, text: str) -> "LimitFamily":
        key = str(text).strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise InvalidParams(f"unknown limit family {text!r}; expected fromA3 or fromA2")


@dataclass(frozen=True)
class FuchsianODE:
    """p2(x) g'' + p1(x) g' + p0(x) g = 0 with polynomial coefficients."""

    family: LimitFamily
    t: tuple[float, ...]
    h: tuple[float, ...]
    l: tuple[float, ...]
    ltilde: float
    btilde: float
    beta: float | None
    p2: LaurentPoly
    p1: LaurentPoly
    p0: LaurentPoly

    def singular_points(self) -> tuple[float, ...]:
        return (0.0,) + self.t


@dataclass(frozen=True)
class HeunForm:
    """Parameters of the Heun normal form reached by the stated transformations.

    The accessory parameter is known only up to the unresolved additive
    constant, hence ``accessory_offset_known`` is always False.
    """

    t: float
    gamma: float
    delta: float
    epsilon: float
    alphaP: float
    betaP: float
    accessory_offset_known: bool = False

    def fuchs_residual(self) -> float:
        lhs = self.gamma + self.delta + self.epsilon
        rhs = self.alphaP + self.betaP + 1.0
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)


def _check_singularities(t: tuple[float, ...]):
    for i, ti in enumerate(t):
        if ti == 0:
            raise CoincidentSingularities(f"t{i + 1} coincides with the singularity at 0")
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if abs(t[i] - t[j]) <= 1e-12 * max(abs(t[i]), abs(t[j])):
                raise CoincidentSingularities(f"t{i + 1} and t{j + 1} coincide")


def limit_ode(
    family: LimitFamily,
    h,
    l,
    t,
    beta: float | None,
    btilde: float,
) -> FuchsianODE:
    """Assemble the limit ODE with the accessory coefficient as an input.

    ``btilde`` is used directly as the ODE's accessory slot; resolving its
    offset against Etilde is ``verify_limit``'s job.
    """
    family = family if isinstance(family, LimitFamily) else LimitFamily.parse(family)
    size = 3 if family is LimitFamily.FROM_A3 else 4
    h = tuple(float(v) for v in h)
    l = tuple(float(v) for v in l)
    t = tuple(float(v) for v in t)
    if len(h) != size or len(l) != size or len(t) != size:
        raise InvalidParams(f"{family.value} needs h, l, t of length {size}")
    _check_singularities(t)
    if family is LimitFamily.FROM_A3 and beta is None:
        raise InvalidParams("fromA3 requires beta")
    if family is LimitFamily.FROM_A2 and beta is not None:
        raise InvalidParams("fromA2 takes no beta")

    prod_t = LaurentPoly.from_roots(t)
    x2 = LaurentPoly.monomial(2)
    p2 = x2 * prod_t

    ltilde = (sum(h) - sum(l) + (2.0 if size == 3 else 3.0)) / 2.0
    p1 = (-2.0 * ltilde) * LaurentPoly.monomial(1) * prod_t
    for i in range(size):
        others = LaurentPoly.from_roots([t[j] for j in range(size) if j != i])
        p1 = p1 + (h[i] - l[i] + 1.0) * x2 * others

    s2 = sum((2.0 * h[i] - 2.0 * l[i] + 1.0) * t[i] for i in range(size))
    tprod = 1.0
    for ti in t:
        tprod *= ti
    if family is LimitFamily.FROM_A3:
        const = tprod * (ltilde + 0.5 + beta / 2.0) * (ltilde + 0.5 - beta / 2.0)
        p0 = LaurentPoly({3: -0.25, 2: -s2 / 4.0, 1: -btilde, 0: -const})
    else:
        lin = tprod * ltilde * sum((ltilde - h[i] + l[i]) / t[i] for i in range(size))
        # Constant-term sign forced by the exact eps^2 limit; it is also the
        # one that puts the x=0 indicial roots at {ltilde, ltilde + 1}.
        const = tprod * ltilde * (ltilde + 1.0)
        p0 = LaurentPoly({4: -0.25, 3: -s2 / 4.0, 2: -btilde, 1: -lin, 0: const})
    return FuchsianODE(
        family=family, t=t, h=h, l=l, ltilde=ltilde, btilde=btilde, beta=beta,
        p2=p2, p1=p1, p0=p0,
    )


def _shift_poly(poly: LaurentPoly, s: float) -> LaurentPoly:
    """p(y + s) for a polynomial p (binomial expansion of each monomial)."""
    if poly.is_zero():
        return LaurentPoly.zero()
    if poly.min_degree() < 0:
        raise ValueError("shift requires nonnegative degrees")
    out: dict[int, float] = {}
    for k, coeff in poly.terms():
        for r in range(k + 1):
            out[r] = out.get(r, 0.0) + coeff * math.comb(k, r) * s ** (k - r)
    return LaurentPoly(out)


def _local_ode_triple(ode: FuchsianODE, point: float) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """(P2, P1, P0) in the local variable: y = x - s, or zeta = 1/x at infinity.

    At infinity the substitution x = 1/zeta turns g' into -zeta^2 d/dzeta
    and g'' into zeta^4 d^2/dzeta^2 + 2 zeta^3 d/dzeta; the combined triple
    is cleared of negative powers by a common monomial factor (which does
    not affect the recurrence).
    """
    if math.isinf(point):
        r2 = ode.p2.reversed()
        r1 = ode.p1.reversed()
        r0 = ode.p0.reversed()
        P2 = r2.shift(4)
        P1 = 2.0 * r2.shift(3) - r1.shift(2)
        P0 = r0
        lows = [p.min_degree() for p in (P2, P1, P0) if not p.is_zero()]
        clear = -min(lows)
        if clear > 0:
            P2, P1, P0 = P2.shift(clear), P1.shift(clear), P0.shift(clear)
        return P2, P1, P0
    return (
        _shift_poly(ode.p2, point),
        _shift_poly(ode.p1, point),
        _shift_poly(ode.p0, point),
    )


class _OdeFrame:
    """Monomial action D_r(mu): p2 mu(mu-1) + p1 mu + p0 at relative index r."""

    def __init__(self, triple):
        P2, P1, P0 = triple
        self.P2, self.P1, self.P0 = P2, P1, P0
        mins = []
        maxs = []
        for poly, off in ((P2, -2), (P1, -1), (P0, 0)):
            if not poly.is_zero():
                mins.append(poly.min_degree() + off)
                maxs.append(poly.max_degree() + off)
        self.rmin = min(mins)
        self.span = max(maxs) - self.rmin

    def _parts(self, r: int, mu: float) -> tuple[float, float, float]:
        return (
            self.P2.coefficient(r + 2) * mu * (mu - 1.0),
            self.P1.coefficient(r + 1) * mu,
            self.P0.coefficient(r),
        )

    def d(self, r: int, mu: float) -> float:
        a, b, c = self._parts(r, mu)
        return a + b + c

    def d_scale(self, r: int, mu: float) -> float:
        a, b, c = self._parts(r, mu)
        return abs(a) + abs(b) + abs(c)

    def indicial_roots(self) -> tuple[float, float]:
        a2 = self.P2.coefficient(self.rmin + 2)
        a1 = self.P1.coefficient(self.rmin + 1) - a2
        a0 = self.P0.coefficient(self.rmin)
        if a2 == 0:
            raise IrregularPoint("indicial equation degenerates; point is not regular singular")
        r1, r2 = solve_quadratic(a2, a1, a0)
        return tuple(sorted((r1.real, r2.real)))


def indicial_exponents(ode: FuchsianODE, point: float) -> tuple[float, float]:
    """The two indicial roots at a singular (or ordinary) point; inf allowed."""
    return tuple(_OdeFrame(_local_ode_triple(ode, point)).indicial_roots())


def ode_frobenius(
    ode: FuchsianODE,
    point: float,
    exponent: float,
    order: int,
    vanish_tol: float = 1e-10,
) -> tuple[float, ...]:
    """Truncated Frobenius coefficients (c_0 = 1) of the ODE at a point.

    Resonances that satisfy the consistency condition get a zero free
    coefficient (matching the q-side convention); otherwise
    ResonantLogarithmic is raised.
    """
    frame = _OdeFrame(_local_ode_triple(ode, point))
    lead0 = frame.d(frame.rmin, exponent)
    if abs(lead0) > ODE_EXPONENT_TOL * max(frame.d_scale(frame.rmin, exponent), 1.0):
        raise ExponentMismatch(
            f"exponent {exponent!r} does not solve the indicial equation at {point!r}"
        )
    coeffs = [1.0]
    for n in range(1, order + 1):
        mu = exponent + n
        lead = frame.d(frame.rmin, mu)
        lead_scale = frame.d_scale(frame.rmin, mu)
        total = 0.0
        scale = 0.0
        for ell in range(max(0, n - frame.span), n):
            term = frame.d(frame.rmin + n - ell, exponent + ell)
            total += term * coeffs[ell]
            scale += frame.d_scale(frame.rmin + n - ell, exponent + ell) * abs(coeffs[ell])
        if abs(lead) <= ODE_RESONANCE_TOL * max(lead_scale, 1.0):
            if abs(total) <= vanish_tol * max(scale, TINY):
                coeffs.append(0.0)
            else:
                raise ResonantLogarithmic(
                    f"resonance at n={n} fails the consistency condition"
                )
        else:
            coeffs.append(-total / lead)
    return tuple(coeffs)


def to_heun_form(ode: FuchsianODE) -> HeunForm:
    """The Heun normal-form parameters reached by the stated cross-ratio maps."""
    t = ode.t
    h, l = ode.h, ode.l
    lt = ode.ltilde
    if ode.family is LimitFamily.FROM_A3:
        den = t[2] * (t[0] - t[1])
        if abs(den) <= TINY:
            raise CoincidentSingularities("cross-ratio denominator t3 (t1 - t2) vanishes")
        tt = t[1] * (t[0] - t[2]) / den
        gamma = 1.0 + h[0] - l[0]
        delta = 1.0 + h[1] - l[1]
        eps = 1.0 + h[2] - l[2]
        alpha_p = lt - ode.beta / 2.0
        beta_p = lt + ode.beta / 2.0
    else:
        den = (t[3] - t[0]) * (t[2] - t[1])
        if abs(den) <= TINY:
            raise CoincidentSingularities("cross-ratio denominator (t4 - t1)(t3 - t2) vanishes")
        tt = (t[3] - t[1]) * (t[2] - t[0]) / den
        gamma = 1.0 + h[1] - l[1]
        delta = 1.0 + h[2] - l[2]
        eps = 1.0 + h[3] - l[3]
        alpha_p = lt - 0.5
        beta_p = lt - 0.5 + l[0] - h[0]
    return HeunForm(t=tt, gamma=gamma, delta=delta, epsilon=eps, alphaP=alpha_p, betaP=beta_p)


def _accessory_E(family: LimitFamily, h, l, t, etilde: float, eps: float) -> float:
    """The accessory scaling E(eps) = 2 sum t_m t_n + eps E1 + eps^2 Etilde."""
    size = len(t)
    pair_sum = sum(t[m] * t[n] for m in range(size) for n in range(m + 1, size))
    e1 = sum(
        (h[m] + h[n] + l[m] + l[n]) * t[m] * t[n]
        for m in range(size)
        for n in range(m + 1, size)
    )
    return 2.0 * pair_sum + eps * e1 + eps * eps * etilde


def _q_side_coeffs(family, h, l, t, beta, etilde, eps, order):
    """Exponent and series coefficients of the q-equation at x=0 for q = 1+eps."""
    if family is LimitFamily.FROM_A3:
        params = ModelParams(
            family=Family.A3, q=1.0 + eps, h=h, l=l, t=t, beta=beta,
            E=_accessory_E(family, h, l, t, etilde, eps),
        )
    else:
        params = ModelParams(
            family=Family.A2, q=1.0 + eps, h=h, l=l, t=t,
            E=_accessory_E(family, h, l, t, etilde, eps),
        )
    eq = build_equation(params)
    pair = exponents(eq, BasePoint.ZERO)
    expansion = frobenius_series(eq, BasePoint.ZERO, pair.lambda1, order)
    if expansion.status is ExpansionStatus.LOGARITHMIC_NEEDED:
        raise ResonantLogarithmic("q-side series truncated by a non-apparent resonance")
    return pair.lambda1, expansion.coeffs


@dataclass(frozen=True)
class LimitReport:
    family: LimitFamily
    etilde: float
    eps: tuple[float, ...]
    lambda_q: float
    lambda_ode: float
    exponent_residuals: tuple[float, ...]
    const_fits: tuple[float, ...]
    const_star: float
    btilde_star: float
    fit_index: int
    coefficient_differences: dict[int, tuple[float, ...]]
    exact_indices: tuple[int, ...]
    slopes: dict[int, float]


def verify_limit(
    family,
    h,
    l,
    t,
    beta: float | None,
    etilde: float,
    epsilon_list,
    order: int = 8,
    calibration_eps: float = 5e-3,
) -> LimitReport:
    """Measure the coefficientwise convergence of the q-series to the ODE series.

    For each eps the q-equation is built with the scaled accessory value
    and its x=0 series (smaller exponent) is compared against the limit
    ODE's Frobenius series.  The unknown additive constant in the ODE
    accessory slot is fitted from the first coefficient that is sensitive
    to it (that coefficient is affine in the slot); the single-eps fit
    drifts linearly in eps, so the frozen value comes from a two-point
    Richardson extrapolation at ``calibration_eps`` and half of it.  Much
    smaller calibration values are counterproductive: the q-equation's
    recurrence sums cancel to O(eps^2) of their term size, so roundoff
    grows like 1e-16/eps^2.  Per-eps fits are also reported as the
    stability record.  Differences of identically-matching coefficients
    (exact resonance zeros) are reported as exact and excluded from slope
    fits.
    """
    family = family if isinstance(family, LimitFamily) else LimitFamily.parse(family)
    eps_list = tuple(float(e) for e in epsilon_list)
    if not eps_list:
        raise InvalidParams("epsilon_list must be nonempty")
    if any(not (0.0 < e <= 0.1) for e in eps_list):
        raise InvalidParams("epsilon values must lie in (0, 0.1]")
    if any(eps_list[i] <= eps_list[i + 1] for i in range(len(eps_list) - 1)):
        raise InvalidParams("epsilon values must be strictly descending")

    # ODE-side machinery; the accessory slot enters series coefficients
    # affinely at its first appearance, so two probes identify the slot.
    def ode_coeffs(btilde: float) -> tuple[tuple[float, ...], float]:
        ode = limit_ode(family, h, l, t, beta, btilde)
        lo, hi = indicial_exponents(ode, 0.0)
        rho = lo
        return ode_frobenius(ode, 0.0, rho, order), rho

    base_coeffs, rho = ode_coeffs(0.0)
    probe_coeffs, _ = ode_coeffs(1.0)
    sensitivity = [probe_coeffs[n] - base_coeffs[n] for n in range(order + 1)]
    fit_index = next(
        (n for n in range(1, order + 1) if abs(sensitivity[n]) > 1e-12 * (1.0 + abs(base_coeffs[n]))),
        None,
    )
    if fit_index is None:
        raise InvalidParams("no series coefficient is sensitive to the accessory slot")

    def fit_btilde(eps: float) -> float:
        _, qc = _q_side_coeffs(family, h, l, t, beta, etilde, eps, order)
        return (qc[fit_index] - base_coeffs[fit_index]) / sensitivity[fit_index]

    if not (0.0 < calibration_eps <= 0.1):
        raise InvalidParams("calibration_eps must lie in (0, 0.1]")
    # fit(eps) = fit(0) + c*eps + O(eps^2); eliminate the linear term.
    btilde_star = 2.0 * fit_btilde(calibration_eps / 2.0) - fit_btilde(calibration_eps)
    const_star = btilde_star - etilde
    const_fits = tuple(fit_btilde(e) - etilde for e in eps_list)

    star_coeffs, _ = ode_coeffs(btilde_star)

    lam_qs = []
    diffs: dict[int, list[float]] = {n: [] for n in range(1, order + 1)}
    for eps in eps_list:
        lam_q, qc = _q_side_coeffs(family, h, l, t, beta, etilde, eps, order)
        lam_qs.append(lam_q)
        for n in range(1, order + 1):
            diffs[n].append(abs(qc[n] - star_coeffs[n]))

    exact = tuple(
        n
        for n in range(1, order + 1)
        if all(d <= 1e-12 * (1.0 + abs(star_coeffs[n])) for d in diffs[n])
    )
    slopes = {
        n: loglog_slope(eps_list, diffs[n])
        for n in range(1, order + 1)
        if n not in exact and len(eps_list) >= 2 and all(d > 0 for d in diffs[n])
    }
    return LimitReport(
        family=family,
        etilde=etilde,
        eps=eps_list,
        lambda_q=lam_qs[0],
        lambda_ode=rho,
        exponent_residuals=tuple(abs(lq - rho) for lq in lam_qs),
        const_fits=const_fits,
        const_star=const_star,
        btilde_star=btilde_star,
        fit_index=fit_index,
        coefficient_differences={n: tuple(v) for n, v in diffs.items()},
        exact_indices=exact,
        slopes=slopes,
    )
