"""Exception types shared across the package."""

from __future__ import annotations


class ConsistencyError(RuntimeError):
    """An internal cross-check failed.

    Raised when two computation paths that must agree (exact series
    identities, quotient-space dimension counts, primitivity of logarithms
    of group-like elements) disagree.  This signals a bug or a broken
    invariant, never bad user input.
    """


class PrecisionError(RuntimeError):
    """The requested precision cannot be reached within the iteration caps."""


class ModulusMismatchError(ValueError):
    """Two mod-N objects with different moduli were combined."""


class SchemaError(ValueError):
    """Invalid JSON input; ``violations`` lists JSON-pointer style messages."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
