"""Shared random-parameter generators (seeded per test for determinism)."""

from __future__ import annotations

import random

from qheun import Family, ModelParams, VariantSkeleton


def noninteger_offset(rng: random.Random, max_int: int = 2) -> float:
    """A value bounded away from every integer by at least 0.05."""
    return (rng.randint(0, max_int) + rng.uniform(0.05, 0.95)) * rng.choice([-1.0, 1.0])


def random_q(rng: random.Random) -> float:
    return rng.uniform(1.05, 2.2) if rng.random() < 0.5 else rng.uniform(0.45, 0.95)


def random_params(rng: random.Random, family: Family, **overrides) -> ModelParams:
    """Valid parameters with non-integer exponent gaps (no accidental resonances)."""
    size = family.size
    kw = dict(
        family=family,
        q=random_q(rng),
        h=tuple(rng.uniform(-1.0, 1.0) for _ in range(size)),
        l=tuple(rng.uniform(-1.0, 1.0) for _ in range(size)),
        t=tuple(rng.uniform(0.3, 2.0) for _ in range(size)),
        E=rng.uniform(-3.0, 3.0),
    )
    if family is Family.A4:
        alpha1 = rng.uniform(-1.0, 1.0)
        kw.update(
            alpha1=alpha1,
            alpha2=alpha1 + noninteger_offset(rng),
            beta=abs(noninteger_offset(rng)),
        )
    elif family is Family.A3:
        kw.update(beta=abs(noninteger_offset(rng)))
    kw.update(overrides)
    return ModelParams(**kw)


def random_skeleton(rng: random.Random, family: Family, **overrides) -> VariantSkeleton:
    size = family.size
    kw = dict(
        family=family,
        q=random_q(rng),
        h=tuple(rng.uniform(-1.0, 1.0) for _ in range(size)),
        l=tuple(rng.uniform(-1.0, 1.0) for _ in range(size)),
        t=tuple(rng.uniform(0.3, 2.0) for _ in range(size)),
        E=rng.uniform(-3.0, 3.0),
    )
    if family is Family.A3:
        kw.update(beta=abs(noninteger_offset(rng)) + 0.05)
    kw.update(overrides)
    return VariantSkeleton(**kw)
