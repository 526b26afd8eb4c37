"""Exception types shared across the package."""


class OrdclassError(Exception):
    """Base class for all errors raised by this package."""


class SquareFreeViolation(OrdclassError):
    """The defining polynomial is not monic integral square-free."""


class ZeroDivisor(OrdclassError):
    """Inversion of a zero divisor was attempted."""


class NotFullRank(OrdclassError):
    """A lattice construction did not reach full rank."""


class NonPositiveDefinite(OrdclassError):
    """A Gram matrix expected to be positive definite is not."""


class FactorizationError(OrdclassError):
    """Integer factorization exceeded its retry budget."""


class FactorizationUnavailable(OrdclassError):
    """Polynomial factorization beyond the naive helper was requested."""


class RelationSearchBudgetExceeded(OrdclassError):
    """Class group relation search hit its budget before saturating."""


class PolynomialMismatch(OrdclassError):
    """A matrix does not have the declared minimal/characteristic polynomial."""


class NotBass(OrdclassError):
    """An operation requiring a Bass order was called on a non-Bass order."""


class UnsupportedConjugacyProblem(OrdclassError):
    """Conjugacy decision outside the supported (m = c or Bass uniform) cases."""
