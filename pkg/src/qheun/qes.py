"""Quasi-exact solvability: invariant monomial subspaces and exact eigenpairs.

Each family preserves finite spans of monomials x^(lam+k), k = 0..n, when
an integrality condition ties the base exponent lam to the exponent data:
n = -lam - alpha for A4 (lam from either x=0 exponent, alpha from either
x=infinity exponent), and n = 1/2 - lam for A3/A2 (the top monomial is
x^(1/2)).  On such a span the operator acts by a small banded matrix whose
eigenvalues are exact accessory values E with polynomial-type
eigenfunctions; every returned eigenpair carries a residual certificate
from the full q-difference equation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ClosureViolation, ConvergenceFailure, InvalidParams
from .laurent import LaurentPoly
from .numutil import TINY
from .operator import apply_equation_offset, build_equation, d_coefficients
from .params import Family, ModelParams

__all__ = [
    "InvariantSubspace",
    "EigenPair",
    "find_subspaces",
    "operator_matrix",
    "eigenpairs",
    "solve_subspace",
]

#: Integrality tolerance for the subspace conditions (same as resonance).
INTEGRALITY_TOL = 1e-8
#: Closure certificate tolerance for out-of-space coefficients.
CLOSURE_TOL = 1e-10
#: Required eigenpair residual.
EIGEN_TOL = 1e-8


@dataclass(frozen=True)
class InvariantSubspace:
    """Span of x^(lam+k), k=0..n, preserved by the family's operator."""

    family: Family
    lam: float
    n: int
    basis: tuple[float, ...]
    matrix: np.ndarray
    branch: str

    @property
    def dimension(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: complex
    coefficients: tuple[complex, ...]
    residual: float


def _base_exponents(params: ModelParams) -> list[tuple[str, float]]:
    """Candidate base exponents (x=0 exponents) per family, with labels."""
    if params.family is Family.A4:
        core = (
            params.sum_h - params.sum_l - params.alpha1 - params.alpha2 + 2.0
        ) / 2.0
        return [("lambda1", core - params.beta / 2.0), ("lambda2", core + params.beta / 2.0)]
    if params.family is Family.A3:
        core = (params.sum_h - params.sum_l + 3.0) / 2.0
        return [("lambda1", core - params.beta / 2.0), ("lambda2", core + params.beta / 2.0)]
    return [("lambda1", (params.sum_h - params.sum_l + 3.0) / 2.0)]


def _candidates(params: ModelParams) -> list[tuple[str, float, float]]:
    """(branch label, lam, raw n) before the integrality test."""
    out = []
    for name, lam in _base_exponents(params):
        if params.family is Family.A4:
            for aname, alpha in (("alpha1", params.alpha1), ("alpha2", params.alpha2)):
                out.append((f"{name}/{aname}", lam, -lam - alpha))
        else:
            out.append((name, lam, 0.5 - lam))
    return out


def _build_matrix(params: ModelParams, lam: float, n: int, tol: float) -> np.ndarray:
    matrix = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        shifts = d_coefficients(params, lam + k)
        scale = max(abs(val) for _, val in shifts)
        for s, val in shifts:
            row = k + s
            if 0 <= row <= n:
                matrix[row, k] = val
            elif abs(val) > tol * max(scale, TINY):
                raise ClosureViolation(
                    f"basis monomial k={k} leaks to shift {s:+d} with weight {val:.3e}"
                )
    return matrix


def find_subspaces(params: ModelParams, tol: float = INTEGRALITY_TOL) -> list[InvariantSubspace]:
    """All invariant monomial spans whose integrality condition holds.

    Returns an empty list when no condition is satisfied.  Coinciding
    (lam, n) hits (e.g. beta = 0) are reported once.
    """
    found: list[InvariantSubspace] = []
    for branch, lam, n_raw in _candidates(params):
        n = round(n_raw)
        if n < 0 or abs(n_raw - n) > tol:
            continue
        if any(sub.n == n and abs(sub.lam - lam) <= 1e-9 * (1.0 + abs(lam)) for sub in found):
            continue
        matrix = _build_matrix(params, lam, n, CLOSURE_TOL)
        found.append(
            InvariantSubspace(
                family=params.family,
                lam=lam,
                n=n,
                basis=tuple(lam + k for k in range(n + 1)),
                matrix=matrix,
                branch=branch,
            )
        )
    found.sort(key=lambda sub: (sub.n, sub.lam))
    return found


def operator_matrix(
    params: ModelParams, sub: InvariantSubspace, tol: float = CLOSURE_TOL
) -> np.ndarray:
    """Matrix of the operator on the monomial basis, with closure certified.

    Column k lists the coefficients of A x^(lam+k) on the basis; any
    out-of-space coefficient above tolerance raises ClosureViolation
    (an integrality-condition false positive).
    """
    return _build_matrix(params, sub.lam, sub.n, tol)


def _full_equation_residual(params, lam, coeffs, eigenvalue) -> float:
    """Relative residual of (A - E) applied to sum_k coeffs[k] x^(lam+k)."""
    eq = build_equation(replace(params, E=0.0))
    g = LaurentPoly({k: c for k, c in enumerate(coeffs)})
    applied = apply_equation_offset(eq, lam, g)
    shifted = g.shift(eq.power) * eigenvalue
    residual = applied - shifted
    scale = max(applied.max_abs(), shifted.max_abs(), TINY)
    return residual.max_abs() / scale


def eigenpairs(
    matrix: np.ndarray,
    params: ModelParams | None = None,
    subspace: InvariantSubspace | None = None,
    tol: float = EIGEN_TOL,
) -> list[EigenPair]:
    """All eigenpairs of the subspace matrix, residual-certified.

    Complex eigenvalues are first-class (the banded matrices are not
    symmetric).  Eigenvectors are normalized so the first nonzero entry is
    1.  When the producing params/subspace are supplied, the residual is
    measured on the full q-difference equation through the application
    oracle; otherwise it is the matrix residual.  Raises
    ConvergenceFailure if any residual exceeds ``tol``.
    """
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidParams("eigenpairs expects a square matrix")
    if mat.shape[0] > 64:
        raise InvalidParams("matrices larger than 64 are outside the contract")
    try:
        values, vectors = np.linalg.eig(mat)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver failed: {exc}") from exc

    order = np.lexsort((values.imag, values.real))
    mat_scale = max(np.max(np.abs(mat)), TINY)
    pairs = []
    for idx in order:
        value = values[idx]
        vec = vectors[:, idx]
        vmax = np.max(np.abs(vec))
        first = next(i for i, entry in enumerate(vec) if abs(entry) > 1e-8 * vmax)
        vec = vec / vec[first]
        if abs(value.imag) <= 1e-12 * (1.0 + abs(value)):
            value = float(value.real)
            if np.max(np.abs(vec.imag)) <= 1e-12 * np.max(np.abs(vec.real)):
                vec = vec.real
        coeffs = tuple(vec.tolist())
        if params is not None and subspace is not None:
            residual = _full_equation_residual(params, subspace.lam, coeffs, value)
        else:
            err = mat @ np.asarray(vec) - value * np.asarray(vec)
            residual = float(np.max(np.abs(err))) / (mat_scale * float(np.max(np.abs(vec))))
        if residual > tol:
            raise ConvergenceFailure(
                f"eigenpair residual {residual:.3e} exceeds tolerance {tol:.1e}"
            )
        pairs.append(EigenPair(eigenvalue=value, coefficients=coeffs, residual=residual))
    return pairs


def solve_subspace(
    params: ModelParams, sub: InvariantSubspace, tol: float = EIGEN_TOL
) -> list[EigenPair]:
    """Eigenpairs of a subspace with full-equation residual certificates."""
    return eigenpairs(sub.matrix, params=params, subspace=sub, tol=tol)
