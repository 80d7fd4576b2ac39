"""Exception types shared across the package."""


class SgholderError(Exception):
    """Base class for all package errors."""


class SignError(SgholderError):
    """A matrix entry has the wrong sign (e.g. positive off-diagonal rate)."""

    def __init__(self, indices, message=None):
        self.indices = tuple(indices)
        super().__init__(message or f"wrong sign at entries {self.indices}")


class RowSumError(SgholderError):
    """Generator rows do not sum to zero."""

    def __init__(self, indices, message=None):
        self.indices = tuple(indices)
        super().__init__(message or f"rows {self.indices} do not sum to 0")


class DetailedBalanceError(SgholderError):
    """mu_i A_ij != mu_j A_ji beyond tolerance."""

    def __init__(self, indices, message=None):
        self.indices = tuple(indices)
        super().__init__(message or f"detailed balance fails at {self.indices}")


class ConvergenceError(SgholderError):
    """An iterative solver did not reach its tolerance."""


class DomainError(SgholderError):
    """A scalar profile is undefined at some spectral point."""


class UnsupportedPair(SgholderError):
    """Operator (p, q) norm requested outside the exactly-solvable list."""


class SymmetryError(SgholderError):
    """psi(g) != psi(g^{-1}) for a would-be negative-type function."""


class CocycleConsistencyError(SgholderError):
    """The orthogonal extension of the cocycle maps is not well defined."""


class BoxTooSmall(SgholderError):
    """Representation box does not contain the coefficient support."""


class NegativeTime(SgholderError):
    """Semigroup evaluated at t < 0."""


class NonpositiveTime(SgholderError):
    """Derivative of unbounded-symbol semigroup evaluated at s <= 0."""


class QuadratureError(SgholderError):
    """Quadrature construction or error control failed."""


class BackendUnsupported(SgholderError):
    """Operation not available for this semigroup backend."""


class IntertwiningUnverified(SgholderError):
    """Gradient does not commute with the semigroup on this model."""


class Gamma2Unverified(SgholderError):
    """Experiment requires the iterated-form positivity check to pass first."""


class WindowError(SgholderError):
    """Requested fit window exits the validity range of the model."""


class ConfigError(SgholderError):
    """Invalid experiment configuration."""
