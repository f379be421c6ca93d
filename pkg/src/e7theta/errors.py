"""Exception hierarchy shared by all modules."""


class E7ThetaError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(E7ThetaError, ValueError):
    """Vector or matrix of the wrong size for its ambient space."""


class BudgetError(E7ThetaError):
    """An enumeration was requested beyond its hard cap."""


class DecompositionError(E7ThetaError, ValueError):
    """Subspaces handed to a construction are not isotropic or not complementary."""


class NotAronholdError(E7ThetaError, ValueError):
    pass


class NotSymplecticError(E7ThetaError, ValueError):
    pass


class LatticeError(E7ThetaError, ValueError):
    """Lattice mismatch, unsupported degree, or a vector of the wrong kind."""


class ReportError(E7ThetaError, ValueError):
    """Malformed or inconsistent abelian action report."""


class DivisorError(E7ThetaError, ValueError):
    """A torus point lies on the root divisor.  ``witness`` is a root in its kernel."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RetryBudgetExceeded(E7ThetaError):
    """Rejection sampling gave up.  ``stats`` holds the rejection counts."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}
