"""Exception types shared across the package.

The CLI maps each family onto a process exit code, so library code raises
the most specific class available rather than a bare ``ValueError``.
"""


class MeshWalkError(Exception):
    """Base class for all package errors."""


class ConfigError(MeshWalkError, ValueError):
    """Inconsistent or malformed configuration (dimensions, fields, files)."""


class DomainError(MeshWalkError, ValueError):
    """An argument lies outside the domain of an operation."""


class NumericalError(MeshWalkError, ArithmeticError):
    """A numerical postcondition (unitarity, quadrature convergence) failed."""


class ResourceError(MeshWalkError, RuntimeError):
    """Requested problem size exceeds what an operation is allowed to allocate."""
