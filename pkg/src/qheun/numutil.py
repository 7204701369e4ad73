"""Small numeric helpers shared across modules."""

from __future__ import annotations

import math

#: Guard against division by an exactly-zero scale.
TINY = 1e-300


def solve_quadratic(a: float, b: float, c: float) -> tuple[complex, complex]:
    """Roots of ``a*x**2 + b*x + c = 0``, numerically stable.

    The larger-magnitude root is computed first and the other follows from
    the product of roots, avoiding cancellation when ``b*b >> 4*a*c``.
    Tiny negative discriminants from rounding at a double root are clamped
    to zero.  Roots are returned as complex numbers; real roots carry zero
    imaginary part.
    """
    if a == 0:
        raise ValueError("leading coefficient is zero; not a quadratic")
    disc = b * b - 4.0 * a * c
    if disc < 0 and -disc <= 1e-13 * (b * b + abs(4.0 * a * c)):
        disc = 0.0
    if disc >= 0:
        s = math.sqrt(disc)
        qq = -0.5 * (b + math.copysign(s, b))
        if qq == 0.0:
            return (complex(0.0), complex(0.0))
        return (complex(qq / a), complex(c / qq))
    s = math.sqrt(-disc)
    re = -b / (2.0 * a)
    im = s / (2.0 * a)
    return (complex(re, im), complex(re, -im))


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    n = len(lx)
    if n < 2:
        raise ValueError("need at least two points for a slope")
    mx = sum(lx) / n
    my = sum(ly) / n
    sxx = sum((u - mx) ** 2 for u in lx)
    sxy = sum((u - mx) * (v - my) for u, v in zip(lx, ly))
    return sxy / sxx


def rel_residual(value: float, scale: float) -> float:
    """Magnitude of ``value`` relative to ``scale`` (guarded)."""
    return abs(value) / max(abs(scale), TINY)
