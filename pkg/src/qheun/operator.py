"""The three degenerate operators as q-difference equations.

Each family gives a three-term equation

    u(x) g(x/q) + v(x) g(x) + w(x) g(qx) = 0

with Laurent-polynomial coefficients.  ``build_equation`` stores the
polynomial (x-multiplied) form of ``(A - E) g = 0``: the stored triple is
``x**power * (A - E)`` with ``power`` 1 for A4/A3 and 2 for A2, so u and w
are honest polynomials with nonzero constant terms.  Multiplying the
equation by a monomial changes neither solutions nor local data, so all
downstream analysis works on this form directly.

Sign convention: with ``E`` the operator eigenvalue, expanding
``x**power * (A - E)`` puts ``-E`` in the accessory slot of v (the x-slot
for A4/A3, the x^2-slot for A2).  The remaining v-coefficients are the
closed forms fixed by the local data.

The module also provides the action of each operator on a monomial x^mu
through closed-form shift coefficients (``d_coefficients``), the universal
brute-force application oracle (``apply_equation`` and its x^lambda-offset
generalization), gauge and argument-scaling transformations, the reduction
to the q-hypergeometric equation, and the truncated 2-phi-1 series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidParams, NotReducible, PochhammerPole
from .laurent import LaurentPoly
from .params import Family, ModelParams

__all__ = [
    "QDiffEquation",
    "build_equation",
    "d_coefficients",
    "apply_equation",
    "apply_equation_offset",
    "gauge_transform",
    "scale_argument",
    "reduce_to_q_hypergeometric",
    "QHypergeometricReduction",
    "standard_q_hypergeometric_equation",
    "q_pochhammer",
    "q_hypergeometric_series",
]


@dataclass(frozen=True)
class QDiffEquation:
    """u(x) g(x/q) + v(x) g(x) + w(x) g(qx) = 0.

    ``power`` records the x-normalization used by ``build_equation`` (0 for
    hand-built equations); it is metadata only.
    """

    u: LaurentPoly
    v: LaurentPoly
    w: LaurentPoly
    q: float
    power: int = 0

    def __post_init__(self):
        if not math.isfinite(self.q) or self.q <= 0 or self.q == 1.0:
            raise InvalidParams(f"invalid q={self.q!r}: require q > 0 and q ≠ 1")
        if self.u.is_zero() or self.w.is_zero():
            raise InvalidParams("u and w must be nonzero (second-order equation)")

    def max_abs(self) -> float:
        return max(self.u.max_abs(), self.v.max_abs(), self.w.max_abs())


def _qp(q: float, exponent: float) -> float:
    # q > 0, so real powers are exp(exponent * ln q).
    return math.exp(exponent * math.log(q))


def build_equation(params: ModelParams) -> QDiffEquation:
    """Assemble x**power * (A<family> - E) g = 0 as a coefficient triple.

    u is the monic product over the q^(h_n + 1/2) t_n roots, w the product
    over the q^(l_n - 1/2) t_n roots (with the extra q^(alpha1+alpha2)
    prefactor for A4), and v carries the family's fixed coefficients
    together with -E in the accessory slot.
    """
    q = params.q
    a_roots = [_qp(q, params.h[i] + 0.5) * params.t[i] for i in range(params.family.size)]
    c_roots = [_qp(q, params.l[i] - 0.5) * params.t[i] for i in range(params.family.size)]
    u = LaurentPoly.from_roots(a_roots)
    w = LaurentPoly.from_roots(c_roots)

    if params.family is Family.A4:
        s = params.sum_h + params.sum_l + params.alpha1 + params.alpha2
        b2 = -(_qp(q, params.alpha1) + _qp(q, params.alpha2))
        b0 = -_qp(q, s / 2) * (_qp(q, params.beta / 2) + _qp(q, -params.beta / 2)) * params.prod_t
        v = LaurentPoly({2: b2, 1: -params.E, 0: b0})
        w = _qp(q, params.alpha1 + params.alpha2) * w
        return QDiffEquation(u, v, w, q, power=1)

    if params.family is Family.A3:
        b3 = -(_qp(q, 0.5) + _qp(q, -0.5))
        b2 = sum((_qp(q, params.h[n]) + _qp(q, params.l[n])) * params.t[n] for n in range(3))
        b0 = (
            _qp(q, (params.sum_h + params.sum_l) / 2)
            * (_qp(q, params.beta / 2) + _qp(q, -params.beta / 2))
            * params.prod_t
        )
        v = LaurentPoly({3: b3, 2: b2, 1: -params.E, 0: b0})
        return QDiffEquation(u, v, w, q, power=1)

    # A2
    b4 = -(_qp(q, 0.5) + _qp(q, -0.5))
    b3 = sum((_qp(q, params.h[n]) + _qp(q, params.l[n])) * params.t[n] for n in range(4))
    p_factor = _qp(q, (params.sum_h + params.sum_l) / 2) * params.prod_t
    b1 = p_factor * sum(
        (_qp(q, -params.h[n]) + _qp(q, -params.l[n])) / params.t[n] for n in range(4)
    )
    b0 = -p_factor * (_qp(q, 0.5) + _qp(q, -0.5))
    v = LaurentPoly({4: b4, 3: b3, 2: -params.E, 1: b1, 0: b0})
    return QDiffEquation(u, v, w, q, power=2)


def _esym(values: list[float]) -> list[float]:
    """Elementary symmetric functions e_0..e_n of the given values."""
    e = [1.0] + [0.0] * len(values)
    for m, val in enumerate(values, start=1):
        for k in range(m, 0, -1):
            e[k] += val * e[k - 1]
    return e


def d_coefficients(params: ModelParams, mu: float) -> list[tuple[int, float]]:
    """Shift coefficients of the operator on a monomial.

    Returns the pairs (s, d_s(mu)) with A<family> x^mu = sum_s d_s(mu)
    x^(mu+s); shifts are {+1, 0, -1} for A4 and extend to +2 (A3) and
    +2..-2 (A2).  The eigenvalue E never enters these.
    """
    q = params.q
    qmu = _qp(q, mu)
    a_roots = [_qp(q, params.h[i] + 0.5) * params.t[i] for i in range(params.family.size)]
    c_roots = [_qp(q, params.l[i] - 0.5) * params.t[i] for i in range(params.family.size)]

    if params.family is Family.A4:
        qa = _qp(q, params.alpha1 + params.alpha2)
        s = params.sum_h + params.sum_l + params.alpha1 + params.alpha2
        d_plus = qa * qmu - (_qp(q, params.alpha1) + _qp(q, params.alpha2)) + 1.0 / qmu
        d_zero = -(a_roots[0] + a_roots[1]) / qmu - (c_roots[0] + c_roots[1]) * qa * qmu
        d_minus = (
            a_roots[0] * a_roots[1] / qmu
            + qa * c_roots[0] * c_roots[1] * qmu
            - _qp(q, s / 2) * (_qp(q, params.beta / 2) + _qp(q, -params.beta / 2)) * params.prod_t
        )
        return [(1, d_plus), (0, d_zero), (-1, d_minus)]

    ea = _esym(a_roots)
    ec = _esym(c_roots)
    sqrt_pair = _qp(q, 0.5) + _qp(q, -0.5)
    d_pp = 1.0 / qmu + qmu - sqrt_pair
    d_p = -ea[1] / qmu - ec[1] * qmu + sum(
        (_qp(q, params.h[n]) + _qp(q, params.l[n])) * params.t[n]
        for n in range(params.family.size)
    )
    d_0 = ea[2] / qmu + ec[2] * qmu

    if params.family is Family.A3:
        d_m = (
            -ea[3] / qmu
            - ec[3] * qmu
            + _qp(q, (params.sum_h + params.sum_l) / 2)
            * (_qp(q, params.beta / 2) + _qp(q, -params.beta / 2))
            * params.prod_t
        )
        return [(2, d_pp), (1, d_p), (0, d_0), (-1, d_m)]

    # A2
    p_factor = _qp(q, (params.sum_h + params.sum_l) / 2) * params.prod_t
    d_m = (
        -ea[3] / qmu
        - ec[3] * qmu
        + p_factor
        * sum((_qp(q, -params.h[n]) + _qp(q, -params.l[n])) / params.t[n] for n in range(4))
    )
    d_mm = ea[4] / qmu + ec[4] * qmu - p_factor * sqrt_pair
    return [(2, d_pp), (1, d_p), (0, d_0), (-1, d_m), (-2, d_mm)]


def apply_equation(eq: QDiffEquation, g: LaurentPoly) -> LaurentPoly:
    """Exact result of substituting g: u * g(x/q) + v * g + w * g(qx).

    This is the universal oracle for all series and recurrence code; it
    shares no logic with the recurrence paths.
    """
    return apply_equation_offset(eq, 0.0, g)


def apply_equation_offset(eq: QDiffEquation, lam: float, g: LaurentPoly) -> LaurentPoly:
    """Apply the equation to x^lam * g(x), returning the coefficient object.

    With g(x) = x^lam p(x), substituting gives x^lam times

        q^(-lam) u(x) p(x/q) + v(x) p(x) + q^(lam) w(x) p(qx),

    which is what is returned; the caller keeps track of the common offset.
    """
    q = eq.q
    qlam = _qp(q, lam)
    part_u = (eq.u * g.dilate(1.0 / q)) * (1.0 / qlam)
    part_w = (eq.w * g.dilate(q)) * qlam
    return part_u + eq.v * g + part_w


def gauge_transform(eq: QDiffEquation, nu: float) -> QDiffEquation:
    """Equation satisfied by h when g = x^nu h solves the input.

    Substituting g = x^nu h multiplies the three coefficients by q^(-nu),
    1 and q^(nu) respectively (a common x^nu factor drops out).
    """
    qnu = _qp(eq.q, nu)
    return QDiffEquation(eq.u * (1.0 / qnu), eq.v, eq.w * qnu, eq.q, power=eq.power)


def scale_argument(eq: QDiffEquation, gamma: float) -> QDiffEquation:
    """Equation satisfied by f(y) = g(gamma * y): coefficients at gamma*y."""
    if gamma == 0:
        raise InvalidParams("scale factor must be nonzero")
    return QDiffEquation(
        eq.u.dilate(gamma), eq.v.dilate(gamma), eq.w.dilate(gamma), eq.q, power=eq.power
    )


class QHypergeometricReduction(NamedTuple):
    a: float
    b: float
    c: float
    equation: QDiffEquation


def standard_q_hypergeometric_equation(a: float, b: float, c: float, q: float) -> QDiffEquation:
    """The normal form (x-q) f(x/q) - ((a+b)x - q - c) f(x) + (abx - c) f(qx) = 0."""
    return QDiffEquation(
        LaurentPoly({1: 1.0, 0: -q}),
        LaurentPoly({1: -(a + b), 0: q + c}),
        LaurentPoly({1: a * b, 0: -c}),
        q,
    )


def reduce_to_q_hypergeometric(params: ModelParams, tol: float = 1e-10) -> QHypergeometricReduction:
    """Divide out the common linear factor of a degenerate A4 equation.

    Requires l2 = h2 + 1 and the matching special accessory value; then
    (x - q^(h2+1/2) t2) divides all three coefficients.  The quotient
    equation, brought to the normal form by the argument scaling
    y = x / (q^(h1-1/2) t1) and a gauge power x^nu, has parameters

        a = q^(nu + alpha1),  b = q^(nu + alpha2),  c = q^(1 + beta),

    with nu = 1 - (l1 - h1 + 1 + alpha1 + alpha2)/2 + beta/2.  The pure
    rescaling alone matches the normal form only for special beta; the
    gauge power supplies the missing freedom.
    """
    if params.family is not Family.A4:
        raise NotReducible("the q-hypergeometric reduction applies to family A4")
    q = params.q
    h1, h2 = params.h
    l1, l2 = params.l
    t1, t2 = params.t
    a1, a2 = params.alpha1, params.alpha2
    beta = params.beta

    gap = l2 - (h2 + 1.0)
    if abs(gap) > tol * (1.0 + abs(h2) + abs(l2)):
        raise NotReducible(f"requires l2 = h2 + 1; offset is {gap:.3e}")

    s_root = _qp(q, h2 + 0.5) * t2
    e_special = -(_qp(q, a1) + _qp(q, a2)) * s_root - _qp(
        q, (h1 - h2 + l1 + l2 + a1 + a2 - 1.0) / 2
    ) * (_qp(q, beta / 2) + _qp(q, -beta / 2)) * t1
    if abs(params.E - e_special) > tol * (1.0 + abs(e_special)):
        raise NotReducible(
            f"accessory parameter must equal {e_special!r} for the common factor; got {params.E!r}"
        )

    eq = build_equation(params)
    parts = []
    for poly in (eq.u, eq.v, eq.w):
        quot, rem = poly.divide_linear(s_root)
        if abs(rem) > tol * max(poly.max_abs(), 1e-300):
            raise NotReducible(f"division remainder {rem:.3e} above tolerance")
        parts.append(quot)
    reduced = QDiffEquation(parts[0], parts[1], parts[2], q)

    sigma = (l1 - h1 + 1.0 + a1 + a2) / 2
    nu = 1.0 - sigma + beta / 2
    gamma = _qp(q, h1 - 0.5) * t1

    normal = scale_argument(gauge_transform(reduced, nu), gamma)
    lead = normal.u.coefficient(1)
    normal = QDiffEquation(
        normal.u * (1.0 / lead), normal.v * (1.0 / lead), normal.w * (1.0 / lead), q
    )

    a = _qp(q, nu + a1)
    b = _qp(q, nu + a2)
    c = _qp(q, 1.0 + beta)
    expected = standard_q_hypergeometric_equation(a, b, c, q)
    for got, want in ((normal.u, expected.u), (normal.v, expected.v), (normal.w, expected.w)):
        if not got.allclose(want, rel=1e-8):
            raise NotReducible("normal-form mismatch after reduction (internal consistency)")
    return QHypergeometricReduction(a, b, c, normal)


def q_pochhammer(lam: float, q: float, n: int) -> float:
    """(lam; q)_n = prod_{i=0}^{n-1} (1 - lam q^i)."""
    out = 1.0
    power = 1.0
    for _ in range(n):
        out *= 1.0 - lam * power
        power *= q
    return out


def q_hypergeometric_series(
    a: float, b: float, c: float, q: float, order: int, tol: float = 1e-12
) -> LaurentPoly:
    """Truncated 2-phi-1 series: sum_{n<order} (a;q)_n (b;q)_n / ((q;q)_n (c;q)_n) x^n.

    Coefficients are built from the term ratio, so each step multiplies by
    (1 - a q^(n-1)) (1 - b q^(n-1)) / ((1 - q^n)(1 - c q^(n-1))).
    """
    if order < 1:
        raise InvalidParams("order must be at least 1")
    coeffs = {0: 1.0}
    term = 1.0
    qn_minus1 = 1.0  # q^(n-1)
    qn = q  # q^n
    for n in range(1, order):
        den1 = 1.0 - qn
        den2 = 1.0 - c * qn_minus1
        if abs(den2) < tol * (1.0 + abs(c * qn_minus1)):
            raise PochhammerPole(f"(c; q)_n factor vanishes at n={n}: c ≈ q^(-{n - 1})")
        if abs(den1) < tol:
            raise PochhammerPole(f"(q; q)_n factor vanishes at n={n}")
        term *= (1.0 - a * qn_minus1) * (1.0 - b * qn_minus1) / (den1 * den2)
        if term != 0.0:
            coeffs[n] = term
        qn_minus1 *= q
        qn *= q
    return LaurentPoly(coeffs)
