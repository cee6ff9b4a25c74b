"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: usage/domain problems exit 2,
resource-guard breaches exit 3, numerical failures exit 4.
"""


class QDLError(Exception):
    """Base class for all package errors."""


class UsageError(QDLError):
    """Bad configuration, unknown experiment tag, malformed input file."""


class DomainError(QDLError, ValueError):
    """Numeric argument outside the mathematical domain of an operation."""


class InvalidDimensionError(DomainError):
    """Hilbert-space dimension too small or otherwise unusable."""


class CapacityError(QDLError):
    """A resource guard (dimension cap, net cardinality, memory budget) tripped."""


class NumericError(QDLError):
    """A numerical routine produced an unusable result (non-Hermitian input,
    defective operator, residual check failure)."""


class ContractError(QDLError):
    """Objects passed together do not belong together (PGM built from a
    different codebook, mismatched dimensions, violated precondition)."""
