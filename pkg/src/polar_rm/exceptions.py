"""Exception types shared across the package.

The CLI maps each class to its own exit code.
"""


class UnsupportedSizeError(ValueError):
    """Requested code order is outside the supported range for an operation."""


class InvalidPatternError(ValueError):
    """A pattern violates a structural requirement (e.g. not downward-closed)."""


class CapacityError(ValueError):
    """Not enough usable split channels for the requested information length."""
