"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: config problems -> 2, numeric
failures -> 3, resource caps -> 4.
"""


class SykdynError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(SykdynError):
    """Operands act on different qubit counts or incompatible shapes."""


class InvalidSpecError(SykdynError, ValueError):
    """A model/ensemble/operator specification is out of range."""


class ResourceCapError(SykdynError):
    """A dense materialization would exceed the configured size cap."""


class SymmetryViolationError(SykdynError):
    """An operator does not respect the symmetry required by the operation."""


class NumericSanityError(SykdynError):
    """A numerical invariant (trace, norm, convergence) failed."""


class PropagationError(NumericSanityError):
    """Krylov propagation failed to converge within the substep budget."""


class FitDomainError(SykdynError):
    """Fit window contains no usable data (empty or non-positive)."""


class ConfigError(SykdynError):
    """Run configuration is malformed or inconsistent."""
