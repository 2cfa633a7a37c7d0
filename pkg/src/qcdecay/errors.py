"""Exception types raised across the package."""


class QcDecayError(Exception):
    """Base class for all package errors."""


class NotMonotone(QcDecayError):
    """A lift family parameter produces a non-increasing function."""


class ConvergenceFailure(QcDecayError):
    """An iterative root-finder hit its iteration cap."""


class InversionFailure(ConvergenceFailure):
    """Inverting an exact map failed."""


class DomainError(QcDecayError, ValueError):
    """A point lies outside the domain of an evaluator."""


class QuadratureFailure(QcDecayError):
    """Adaptive quadrature did not reach the requested accuracy."""


class NoConvergence(QcDecayError):
    """The Neumann iteration did not reach its tolerance."""


class TooCloseToBoundary(DomainError):
    """Evaluation requested inside the solver's exclusion band."""


class DegenerateDerivative(QcDecayError):
    """A holomorphic map has (numerically) vanishing derivative."""


class NotAdmissible(QcDecayError):
    """A Schwarzian candidate is too large to produce a Beltrami coefficient."""


class BadPartition(QcDecayError, ValueError):
    """Radii of an annular partition are not strictly decreasing."""


class UnsupportedKind(QcDecayError, ValueError):
    """Unknown distortion-check kind."""


class ConfigError(QcDecayError, ValueError):
    """Invalid suite configuration or family description."""
