"""Exception types raised across the package.

Everything derives from :class:`XformError`. Failures that come from the
numbers (branch cuts, singular parameters, solver breakdown) derive from
:class:`NumericError` so the CLI can map them to a single exit code.
"""


class XformError(Exception):
    """Base class for all package errors."""


class NumericError(XformError):
    """A computation was well-posed as configured but failed numerically."""


class DomainError(NumericError, ValueError):
    """A point lies outside the domain of a map."""

    def __init__(self, message, index=None):
        if index is not None:
            message = f"{message} (at index {index})"
        super().__init__(message)
        self.index = index


class BranchError(DomainError):
    """A point lies outside the range of the principal inverse branch."""


class NotInvertible(DomainError):
    """A composed map cannot be inverted at the requested point."""


class SingularParameter(NumericError, ValueError):
    """A material formula degenerates (zero or infinite parameter)."""


class SingularJacobian(NumericError, ValueError):
    """A deformation gradient has non-positive determinant."""


class NotSymmetric(XformError, ValueError):
    pass


class NotPositiveDefinite(XformError, ValueError):
    pass


class TensorDensity(XformError, TypeError):
    """A scalar-density operation received a tensor-density sample."""


class GridTooSmall(XformError, ValueError):
    pass


class GridMismatch(XformError, ValueError):
    pass


class NonPositiveCoefficient(XformError, ValueError):
    pass


class ZeroField(XformError, ValueError):
    pass


class SingularSystem(NumericError):
    """The discrete Helmholtz system is singular or numerically so."""


class NonConvergence(NumericError):
    """The iterative solver hit its iteration cap."""


class ConfigError(XformError):
    """Base for configuration problems (CLI exit code 2)."""


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    def __init__(self, key, constraint):
        super().__init__(f"{key}: {constraint}")
        self.key = key
        self.constraint = constraint
