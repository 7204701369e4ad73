"""Characterization of the A3 and A2 variants by local data.

Forward direction: given the factored monic products (the skeleton), the
middle-coefficient polynomial is pinned down by prescribing the exponent
differences at 0 and infinity and apparency of the resonant points.  The
elimination runs in a fixed order: the two x=0 characteristic conditions
give lambda and b0 (via the Vieta relations on the actual constant
terms), the x=infinity condition gives the leading b (Vieta again), and
the apparency consistency sum, which is linear in the remaining
coefficient, gives it directly.

Backward direction: assemble the equation with the derived coefficients
and an arbitrary accessory value, then re-check every condition with the
local-analysis machinery.  The accessory slot enters none of the
conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateBeta, NonRealExponent
from .laurent import LaurentPoly
from .local import BasePoint, apparency_residual, exponents
from .operator import QDiffEquation
from .params import Family, VariantSkeleton

__all__ = [
    "DerivedA3",
    "DerivedA2",
    "derive_b_A3",
    "derive_b_A2",
    "assemble_equation",
    "ConditionCheck",
    "CharacterizationReport",
    "verify_characterization",
]

#: Relative tolerance for the pass/fail decisions in the report.
CONDITION_TOL = 1e-8


class DerivedA3(NamedTuple):
    b3: float
    b2: float
    b0: float
    lam: float


class DerivedA2(NamedTuple):
    b4: float
    b3: float
    b1: float
    b0: float
    lam: float


def _monic_products(sk: VariantSkeleton) -> tuple[LaurentPoly, LaurentPoly]:
    q = sk.q
    size = sk.family.size
    u = LaurentPoly.from_roots([q ** (sk.h[i] + 0.5) * sk.t[i] for i in range(size)])
    w = LaurentPoly.from_roots([q ** (sk.l[i] - 0.5) * sk.t[i] for i in range(size)])
    return u, w


def derive_b_A3(sk: VariantSkeleton) -> DerivedA3:
    """Forced coefficients for A3: exponent difference beta at 0, 1 at inf, inf apparent."""
    if sk.family is not Family.A3:
        raise DegenerateBeta("derive_b_A3 applies to family A3")
    if sk.beta == 0:
        raise DegenerateBeta("the exponent difference beta must be nonzero")
    q = sk.q
    u, w = _monic_products(sk)
    lnq = math.log(q)

    # x=0: the root product fixes lambda, the root sum fixes b0.
    ratio = u.coefficient(0) / w.coefficient(0)
    lam = (math.log(ratio) / lnq - sk.beta) / 2.0
    b0 = -w.coefficient(0) * (q**lam + q ** (lam + sk.beta))

    # x=infinity: monic cubics, roots q^(+-1/2) force the leading slot.
    b3 = -(q**0.5 + q**-0.5)

    # Apparency at infinity: linear in the subleading slot.
    b2 = -(q**-0.5) * u.coefficient(2) - q**0.5 * w.coefficient(2)
    return DerivedA3(b3=b3, b2=b2, b0=b0, lam=lam)


def derive_b_A2(sk: VariantSkeleton) -> DerivedA2:
    """Forced coefficients for A2: difference 1 at both points, both apparent."""
    if sk.family is not Family.A2:
        raise DegenerateBeta("derive_b_A2 applies to family A2")
    q = sk.q
    u, w = _monic_products(sk)
    lnq = math.log(q)

    ratio = u.coefficient(0) / w.coefficient(0)
    lam = (math.log(ratio) / lnq - 1.0) / 2.0
    b0 = -w.coefficient(0) * (q**lam + q ** (lam + 1.0))
    b4 = -(q**0.5 + q**-0.5)
    b3 = -(q**-0.5) * u.coefficient(3) - q**0.5 * w.coefficient(3)
    # Apparency at 0 with the smaller exponent: linear in b1.
    b1 = -(q**-lam) * u.coefficient(1) - q**lam * w.coefficient(1)
    return DerivedA2(b4=b4, b3=b3, b1=b1, b0=b0, lam=lam)


def assemble_equation(
    sk: VariantSkeleton, b_overrides: dict[str, float] | None = None
) -> QDiffEquation:
    """Equation built from the skeleton's derived coefficients.

    The accessory slot carries -E per the operator convention.  Individual
    derived coefficients can be overridden (perturbation experiments).
    """
    u, w = _monic_products(sk)
    over = b_overrides or {}
    if sk.family is Family.A3:
        d = derive_b_A3(sk)
        v = LaurentPoly(
            {
                3: over.get("b3", d.b3),
                2: over.get("b2", d.b2),
                1: -sk.E,
                0: over.get("b0", d.b0),
            }
        )
        return QDiffEquation(u, v, w, sk.q, power=1)
    d = derive_b_A2(sk)
    v = LaurentPoly(
        {
            4: over.get("b4", d.b4),
            3: over.get("b3", d.b3),
            2: -sk.E,
            1: over.get("b1", d.b1),
            0: over.get("b0", d.b0),
        }
    )
    return QDiffEquation(u, v, w, sk.q, power=2)


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class CharacterizationReport:
    family: Family
    conditions: tuple[ConditionCheck, ...]
    passed: bool
    exponents_zero: tuple[float, float] | None
    exponents_infinity: tuple[float, float] | None


def _difference_check(eq, point, expected, name, tol) -> tuple[ConditionCheck, tuple | None]:
    try:
        pair = exponents(eq, point)
    except NonRealExponent:
        return ConditionCheck(name, False, math.inf), None
    residual = abs(pair.difference - expected) / max(abs(expected), 1.0)
    return ConditionCheck(name, residual <= tol, residual), (pair.lambda1, pair.lambda2)


def _apparency_check(eq, point, name, tol) -> ConditionCheck:
    try:
        residual = apparency_residual(eq, point)
    except NonRealExponent:
        return ConditionCheck(name, False, math.inf)
    if residual is None:
        # Not even resonant: the apparency condition cannot hold.
        return ConditionCheck(name, False, math.inf)
    return ConditionCheck(name, residual <= tol, residual)


def verify_characterization(
    sk: VariantSkeleton,
    b_overrides: dict[str, float] | None = None,
    tol: float = CONDITION_TOL,
) -> CharacterizationReport:
    """Check the characterization's condition set on the assembled equation.

    Failures are data in the report, not exceptions; the accessory value E
    influences none of the conditions.
    """
    eq = assemble_equation(sk, b_overrides)
    conditions = []
    if sk.family is Family.A3:
        c0, exps0 = _difference_check(
            eq, BasePoint.ZERO, abs(sk.beta), "exponent difference at 0 equals |beta|", tol
        )
        cinf, expsinf = _difference_check(
            eq, BasePoint.INFINITY, 1.0, "exponent difference at infinity equals 1", tol
        )
        capp = _apparency_check(eq, BasePoint.INFINITY, "infinity is apparent", tol)
        conditions = [c0, cinf, capp]
    else:
        c0, exps0 = _difference_check(
            eq, BasePoint.ZERO, 1.0, "exponent difference at 0 equals 1", tol
        )
        cinf, expsinf = _difference_check(
            eq, BasePoint.INFINITY, 1.0, "exponent difference at infinity equals 1", tol
        )
        capp0 = _apparency_check(eq, BasePoint.ZERO, "zero is apparent", tol)
        cappinf = _apparency_check(eq, BasePoint.INFINITY, "infinity is apparent", tol)
        conditions = [c0, cinf, capp0, cappinf]
    return CharacterizationReport(
        family=sk.family,
        conditions=tuple(conditions),
        passed=all(c.passed for c in conditions),
        exponents_zero=exps0,
        exponents_infinity=expsinf,
    )
