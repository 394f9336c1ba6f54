"""Exception hierarchy shared by all modules."""


class RieszMixError(ValueError):
    """Base class for invalid inputs to the library."""


class NotPositiveDefinite(RieszMixError):
    """A matrix expected in the open cone failed Cholesky factorization."""


class DimensionMismatch(RieszMixError):
    pass


class IndexOutOfRange(RieszMixError, IndexError):
    pass


class DomainError(RieszMixError):
    pass


class PoleError(DomainError):
    """Gamma function evaluated at a pole (boundary shape)."""


class UnsupportedOrder(DomainError):
    pass


class BoundaryShape(DomainError):
    """Shape vector is not in the absolutely continuous range."""


class OutOfDomain(DomainError):
    """Canonical parameter outside the Laplace transform domain."""


class ConvergenceError(RuntimeError):
    pass
