"""Exception hierarchy shared across the package.

Structural errors (malformed inputs) are kept distinct from infinite costs,
and internal-check errors signal implementation bugs rather than bad data.
"""

from __future__ import annotations


class CosthomError(Exception):
    """Base class for all package errors."""


class StructureError(CosthomError):
    """Malformed structure, relation, instance or assignment."""


class NotBalancedError(CosthomError):
    """A digraph admits no level function; carries a witness closed walk."""

    def __init__(self, message: str, walk: list[str], net_length: int):
        super().__init__(message)
        self.walk = walk
        self.net_length = net_length


class SizeGuardError(CosthomError):
    """An exhaustive enumeration would exceed the configured size guard."""


class BudgetExceededError(CosthomError):
    """A brute-force search exceeded its assignment budget."""


class NotSatisfiableAnywhereError(CosthomError):
    """A component has no homomorphism into the fully single-edged path."""


class InternalCheckError(CosthomError):
    """An invariant that should hold by theory failed: implementation bug."""


class MonotonicityViolationError(InternalCheckError):
    """Leave-one-out minimal path set failed its verification call."""


class BiconditionalViolationError(InternalCheckError):
    """Rigidity of the source structure and of its encoding disagreed."""


class TotalityViolationError(InternalCheckError):
    """The constructed vertex order is not total."""


class LemmaCheckError(InternalCheckError):
    """A diagonal-power component property failed its post-check."""


class PolymorphismCheckError(InternalCheckError):
    """An extended operation does not preserve the encoding's edges."""


class RangeLeakError(InternalCheckError):
    """An extended operation maps a non-top tuple into the top level."""


class TransferVerificationError(InternalCheckError):
    """A transferred weighted operation set failed verification."""


class EquivalenceViolationError(CosthomError):
    """Optima of a problem and its reduction disagreed.

    Carries the offending record and a greedily minimized counterexample.
    """

    def __init__(self, message: str, record: dict, minimized=None):
        super().__init__(message)
        self.record = record
        self.minimized = minimized
