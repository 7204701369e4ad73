import math
import random

import pytest

from conftest import random_skeleton
from qheun import (
    DegenerateBeta,
    Family,
    VariantSkeleton,
    assemble_equation,
    build_equation,
    derive_b_A2,
    derive_b_A3,
    verify_characterization,
)


def qp(q, s):
    return math.exp(s * math.log(q))


def closed_form_a3(sk):
    q = sk.q
    b3 = -(qp(q, 0.5) + qp(q, -0.5))
    b2 = sum((qp(q, sk.h[n]) + qp(q, sk.l[n])) * sk.t[n] for n in range(3))
    prod_t = sk.t[0] * sk.t[1] * sk.t[2]
    b0 = qp(q, (sum(sk.h) + sum(sk.l)) / 2) * (qp(q, sk.beta / 2) + qp(q, -sk.beta / 2)) * prod_t
    lam = (sum(sk.h) - sum(sk.l) + 3 - sk.beta) / 2
    return b3, b2, b0, lam


def closed_form_a2(sk):
    q = sk.q
    b4 = -(qp(q, 0.5) + qp(q, -0.5))
    b3 = sum((qp(q, sk.h[n]) + qp(q, sk.l[n])) * sk.t[n] for n in range(4))
    prod_t = sk.t[0] * sk.t[1] * sk.t[2] * sk.t[3]
    pf = qp(q, (sum(sk.h) + sum(sk.l)) / 2) * prod_t
    b1 = pf * sum((qp(q, -sk.h[n]) + qp(q, -sk.l[n])) / sk.t[n] for n in range(4))
    b0 = -pf * (qp(q, 0.5) + qp(q, -0.5))
    lam = (sum(sk.h) - sum(sk.l) + 3) / 2
    return b4, b3, b1, b0, lam


def test_derive_a3_matches_closed_forms():
    rng = random.Random(301)
    for _ in range(60):
        sk = random_skeleton(rng, Family.A3)
        got = derive_b_A3(sk)
        b3, b2, b0, lam = closed_form_a3(sk)
        assert math.isclose(got.b3, b3, rel_tol=1e-12)
        assert math.isclose(got.b2, b2, rel_tol=1e-12)
        assert math.isclose(got.b0, b0, rel_tol=1e-12)
        assert math.isclose(got.lam, lam, rel_tol=0, abs_tol=1e-11)


def test_derive_a2_matches_closed_forms():
    rng = random.Random(302)
    for _ in range(60):
        sk = random_skeleton(rng, Family.A2)
        got = derive_b_A2(sk)
        b4, b3, b1, b0, lam = closed_form_a2(sk)
        assert math.isclose(got.b4, b4, rel_tol=1e-12)
        assert math.isclose(got.b3, b3, rel_tol=1e-12)
        assert math.isclose(got.b1, b1, rel_tol=1e-12)
        assert math.isclose(got.b0, b0, rel_tol=1e-12)
        assert math.isclose(got.lam, lam, rel_tol=0, abs_tol=1e-11)


def test_degenerate_beta_rejected():
    sk = random_skeleton(random.Random(303), Family.A3, beta=0.0)
    with pytest.raises(DegenerateBeta):
        derive_b_A3(sk)


def test_assembled_equation_matches_operator_build():
    # The derived coefficients with the same accessory value reproduce the
    # operator module's equation exactly (same -E slot convention).
    rng = random.Random(304)
    for family in (Family.A3, Family.A2):
        for _ in range(25):
            sk = random_skeleton(rng, family)
            assembled = assemble_equation(sk)
            built = build_equation(sk.to_model_params())
            assert assembled.u.allclose(built.u, rel=1e-12)
            assert assembled.v.allclose(built.v, rel=1e-12)
            assert assembled.w.allclose(built.w, rel=1e-12)


def test_verification_passes_with_arbitrary_accessory():
    sk = random_skeleton(random.Random(305), Family.A3, E=17.3)
    report = verify_characterization(sk)
    assert report.passed
    assert len(report.conditions) == 3


def test_verification_a2_all_four_conditions():
    sk = random_skeleton(random.Random(306), Family.A2)
    report = verify_characterization(sk)
    assert report.passed
    assert len(report.conditions) == 4


def test_b2_perturbation_breaks_infinity_apparency():
    sk = random_skeleton(random.Random(307), Family.A3)
    derived = derive_b_A3(sk)
    report = verify_characterization(sk, b_overrides={"b2": derived.b2 + 0.1})
    by_name = {c.name: c for c in report.conditions}
    assert not by_name["infinity is apparent"].passed
    assert by_name["exponent difference at 0 equals |beta|"].passed
    assert by_name["exponent difference at infinity equals 1"].passed


def test_uniqueness_every_coefficient_pins_a_condition():
    rng = random.Random(308)
    for family, keys in ((Family.A3, ("b3", "b2", "b0")), (Family.A2, ("b4", "b3", "b1", "b0"))):
        for _ in range(10):
            sk = random_skeleton(rng, family)
            derived = derive_b_A3(sk) if family is Family.A3 else derive_b_A2(sk)
            for key in keys:
                value = getattr(derived, key)
                report = verify_characterization(sk, b_overrides={key: value * (1 + 1e-3)})
                assert not report.passed, (family, key)


def test_accessory_independence_bitwise():
    rng = random.Random(309)
    for family in (Family.A3, Family.A2):
        sk = random_skeleton(rng, family)
        baseline = None
        for k in range(20):
            shifted = VariantSkeleton(
                family=sk.family, q=sk.q, h=sk.h, l=sk.l, t=sk.t, beta=sk.beta,
                E=-40.0 + 4.3 * k,
            )
            report = verify_characterization(shifted)
            snapshot = (
                report.exponents_zero,
                report.exponents_infinity,
                tuple(c.passed for c in report.conditions),
                tuple(c.residual for c in report.conditions),
            )
            if baseline is None:
                baseline = snapshot
            else:
                assert snapshot[:3] == baseline[:3]
                drift = max(
                    abs(a - b) for a, b in zip(snapshot[3], baseline[3])
                )
                assert drift < 1e-12
