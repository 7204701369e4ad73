"""Exception hierarchy for the qheun package.

Two broad groups matter to callers (and to the CLI exit-code contract):
validation errors (bad inputs: ``InvalidParams``, ``ParseError``,
``DegenerateBeta``) and numerical/domain failures (everything else).
"""


class QHeunError(Exception):
    """Base class for all qheun errors."""


class InvalidParams(QHeunError):
    """Model or skeleton parameters violate an invariant."""


class ParseError(QHeunError):
    """A parameter file or command-line flag could not be parsed."""


class DegenerateBeta(QHeunError):
    """The A3 characterization requires a nonzero exponent difference beta."""


class NotReducible(QHeunError):
    """The q-hypergeometric reduction preconditions do not hold."""


class PochhammerPole(QHeunError):
    """A q-Pochhammer denominator factor vanishes below tolerance."""


class IrregularPoint(QHeunError):
    """The requested base point is not a regular singularity."""


class NonRealExponent(QHeunError):
    """A characteristic root is not a positive real, so no real exponent exists."""


class ExponentMismatch(QHeunError):
    """The supplied exponent does not satisfy the characteristic equation."""


class ClosureViolation(QHeunError):
    """A candidate invariant subspace leaks outside its monomial basis."""


class ConvergenceFailure(QHeunError):
    """The eigensolver did not reach the required residual."""


class CoincidentSingularities(QHeunError):
    """Singularity locations coincide (or a cross-ratio degenerates)."""


class ResonantLogarithmic(QHeunError):
    """A series resonance fails the consistency condition; a log term would be needed."""


#: Errors that indicate bad input rather than a numerical failure.
VALIDATION_ERRORS = (InvalidParams, ParseError, DegenerateBeta)
