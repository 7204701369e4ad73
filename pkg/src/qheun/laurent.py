"""Sparse Laurent polynomials: finite maps from integer degree to coefficient.

This is the universal coefficient object of the package: the three
coefficients of a q-difference equation, truncated local series, and
operator-application results are all Laurent polynomials.  Coefficients are
floats in the public surface; the arithmetic also works unchanged with
complex values (used internally for complex eigenfunctions).

The representation is normalized: exact zeros are never stored, so the
extremal stored degrees always carry nonzero coefficients.  The zero
polynomial is the empty map, with undefined (``None``) extremal degrees.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping


class LaurentPoly:
    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        data = {}
        if coeffs:
            for k, v in coeffs.items():
                if v != 0:
                    data[int(k)] = v
        self._coeffs = data

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1.0})

    @classmethod
    def monomial(cls, degree: int, coeff: float = 1.0) -> "LaurentPoly":
        return cls({degree: coeff})

    @classmethod
    def from_roots(cls, roots: Iterable[float]) -> "LaurentPoly":
        """Monic polynomial with the given roots, prod (x - r)."""
        p = cls.one()
        for r in roots:
            p = p * cls({1: 1.0, 0: -r})
        return p

    # -- inspection --------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._coeffs)

    def coefficient(self, degree: int) -> complex:
        return self._coeffs.get(degree, 0.0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def min_degree(self) -> int | None:
        return min(self._coeffs) if self._coeffs else None

    def max_degree(self) -> int | None:
        return max(self._coeffs) if self._coeffs else None

    def terms(self) -> Iterator[tuple[int, complex]]:
        """Nonzero (degree, coefficient) pairs in increasing degree order."""
        return iter(sorted(self._coeffs.items()))

    def max_abs(self) -> float:
        """Infinity norm of the coefficient vector (0 for the zero polynomial)."""
        return max((abs(v) for v in self._coeffs.values()), default=0.0)

    def absolute(self) -> "LaurentPoly":
        """Coefficient-wise absolute value (for magnitude bookkeeping)."""
        return LaurentPoly({k: abs(v) for k, v in self._coeffs.items()})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0.0) + v
        return LaurentPoly(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out: dict[int, complex] = {}
            for k1, v1 in self._coeffs.items():
                for k2, v2 in other._coeffs.items():
                    k = k1 + k2
                    out[k] = out.get(k, 0.0) + v1 * v2
            return LaurentPoly(out)
        return LaurentPoly({k: v * other for k, v in self._coeffs.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def shift(self, degree: int) -> "LaurentPoly":
        """Multiply by x**degree."""
        return LaurentPoly({k + degree: v for k, v in self._coeffs.items()})

    def dilate(self, factor: float) -> "LaurentPoly":
        """Substitute x -> factor*x, i.e. coefficient k picks up factor**k."""
        return LaurentPoly({k: v * factor**k for k, v in self._coeffs.items()})

    def reversed(self) -> "LaurentPoly":
        """Substitute x -> 1/x (degree k becomes -k)."""
        return LaurentPoly({-k: v for k, v in self._coeffs.items()})

    def __call__(self, x: complex) -> complex:
        return sum(v * x**k for k, v in self._coeffs.items())

    def divide_linear(self, root: float) -> tuple["LaurentPoly", float]:
        """Synthetic division by (x - root); returns (quotient, remainder).

        Requires nonnegative support (ordinary polynomial); the remainder is
        the scalar value at the root.
        """
        if self.is_zero():
            return LaurentPoly.zero(), 0.0
        lo = self.min_degree()
        if lo < 0:
            raise ValueError("divide_linear requires nonnegative degrees")
        hi = self.max_degree()
        dense = [self.coefficient(k) for k in range(hi + 1)]
        quot = [0.0] * hi
        carry = 0.0
        for i in range(hi, 0, -1):
            carry = dense[i] + root * carry if i < hi else dense[i]
            quot[i - 1] = carry
        remainder = dense[0] + root * carry if hi >= 1 else dense[0]
        return LaurentPoly({i: c for i, c in enumerate(quot)}), remainder

    # -- comparison --------------------------------------------------------

    def allclose(self, other: "LaurentPoly", rel: float = 1e-12, abs_tol: float = 0.0) -> bool:
        scale = max(self.max_abs(), other.max_abs())
        bound = max(rel * scale, abs_tol)
        keys = set(self._coeffs) | set(other._coeffs)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= bound for k in keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __repr__(self) -> str:
        if self.is_zero():
            return "LaurentPoly(0)"
        body = " + ".join(f"{v!r}*x^{k}" for k, v in self.terms())
        return f"LaurentPoly({body})"
