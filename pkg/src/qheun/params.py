"""Parameter containers for the degenerate Ruijsenaars-van Diejen families.

Three families are supported, named by the degeneration order of the
operator: A4 (the q-Heun equation itself, two factor roots), A3 (three
roots) and A2 (four roots).  Throughout, ``q`` is a positive real not
equal to 1 and all exponent parameters are real; ``E`` is the accessory
(eigenvalue) parameter of ``(A - E) g = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import InvalidParams

__all__ = ["Family", "ModelParams", "VariantSkeleton"]


class Family(Enum):
    A4 = "A4"
    A3 = "A3"
    A2 = "A2"

    @property
    def size(self) -> int:
        """Length of the h/l/t parameter vectors."""
        return {Family.A4: 2, Family.A3: 3, Family.A2: 4}[self]

    @classmethod
    def parse(cls, text: str) -> "Family":
        try:
            return cls(str(text).strip().upper())
        except ValueError:
            raise InvalidParams(f"unknown family {text!r}; expected one of A4, A3, A2") from None


def _as_vector(name: str, value, size: int) -> tuple[float, ...]:
    try:
        vec = tuple(float(v) for v in value)
    except TypeError:
        raise InvalidParams(f"{name} must be a sequence of {size} numbers") from None
    if len(vec) != size:
        raise InvalidParams(f"{name} must have length {size} for this family, got {len(vec)}")
    for v in vec:
        if not math.isfinite(v):
            raise InvalidParams(f"{name} contains a non-finite entry")
    return vec


def _check_q(q: float) -> float:
    q = float(q)
    if not math.isfinite(q) or q <= 0 or q == 1.0:
        raise InvalidParams(f"invalid q={q!r}: require q > 0 and q ≠ 1")
    return q


def _check_scalar(name: str, value) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParams(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters (q; h_i, l_i, t_i; alpha_1, alpha_2; beta; E)."""

    family: Family
    q: float
    h: tuple[float, ...]
    l: tuple[float, ...]
    t: tuple[float, ...]
    alpha1: float | None = None
    alpha2: float | None = None
    beta: float | None = None
    E: float = 0.0

    def __post_init__(self):
        family = self.family if isinstance(self.family, Family) else Family.parse(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "q", _check_q(self.q))
        size = family.size
        object.__setattr__(self, "h", _as_vector("h", self.h, size))
        object.__setattr__(self, "l", _as_vector("l", self.l, size))
        object.__setattr__(self, "t", _as_vector("t", self.t, size))
        for i, ti in enumerate(self.t):
            if ti == 0:
                raise InvalidParams(f"t{i + 1} must be nonzero")
        if family is Family.A4:
            if self.alpha1 is None or self.alpha2 is None or self.beta is None:
                raise InvalidParams("family A4 requires alpha1, alpha2 and beta")
            object.__setattr__(self, "alpha1", _check_scalar("alpha1", self.alpha1))
            object.__setattr__(self, "alpha2", _check_scalar("alpha2", self.alpha2))
            object.__setattr__(self, "beta", _check_scalar("beta", self.beta))
        elif family is Family.A3:
            if self.beta is None:
                raise InvalidParams("family A3 requires beta")
            if self.alpha1 is not None or self.alpha2 is not None:
                raise InvalidParams("family A3 takes no alpha parameters")
            object.__setattr__(self, "beta", _check_scalar("beta", self.beta))
        else:
            if self.alpha1 is not None or self.alpha2 is not None or self.beta is not None:
                raise InvalidParams("family A2 takes no alpha or beta parameters")
        object.__setattr__(self, "E", _check_scalar("E", self.E))

    @property
    def sum_h(self) -> float:
        return sum(self.h)

    @property
    def sum_l(self) -> float:
        return sum(self.l)

    @property
    def prod_t(self) -> float:
        out = 1.0
        for ti in self.t:
            out *= ti
        return out

    def with_accessory(self, E: float) -> "ModelParams":
        return replace(self, E=float(E))


@dataclass(frozen=True)
class VariantSkeleton:
    """Factored-roots data (q; h, l, t; beta for A3; E) for the A3/A2 characterization.

    This is the input to the characterization direction: the monic products
    built from (h, t) and (l, t) are prescribed, while the middle-coefficient
    polynomial is to be derived from local conditions.
    """

    family: Family
    q: float
    h: tuple[float, ...]
    l: tuple[float, ...]
    t: tuple[float, ...]
    beta: float | None = None
    E: float = 0.0

    def __post_init__(self):
        family = self.family if isinstance(self.family, Family) else Family.parse(self.family)
        if family is Family.A4:
            raise InvalidParams("VariantSkeleton covers the A3 and A2 variants only")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "q", _check_q(self.q))
        size = family.size
        object.__setattr__(self, "h", _as_vector("h", self.h, size))
        object.__setattr__(self, "l", _as_vector("l", self.l, size))
        object.__setattr__(self, "t", _as_vector("t", self.t, size))
        for i, ti in enumerate(self.t):
            if ti == 0:
                raise InvalidParams(f"t{i + 1} must be nonzero")
        if family is Family.A3:
            if self.beta is None:
                raise InvalidParams("family A3 requires beta")
            object.__setattr__(self, "beta", _check_scalar("beta", self.beta))
        elif self.beta is not None:
            raise InvalidParams("family A2 takes no beta parameter")
        object.__setattr__(self, "E", _check_scalar("E", self.E))

    def to_model_params(self) -> ModelParams:
        """The ModelParams carrying the same data (for cross-checks)."""
        return ModelParams(
            family=self.family, q=self.q, h=self.h, l=self.l, t=self.t,
            beta=self.beta, E=self.E,
        )
