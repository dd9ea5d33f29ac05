"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`WittError`.
Domain errors (a precondition on the inputs failed) and verification
failures (a mathematical identity that must hold did not) are kept apart so
the CLI can map them onto distinct exit codes.
"""

from __future__ import annotations


class WittError(Exception):
    """Base class for all library errors."""


class DomainError(WittError):
    """The inputs lie outside the domain of the requested operation."""


class VerificationFailure(WittError):
    """A checked identity failed; indicates a bug or corrupted data."""


class RingMismatch(DomainError):
    pass


class TruncationError(DomainError):
    """Index out of range, truncation too small, or length underflow."""


class NonExactDivision(DomainError):
    pass


class NonzeroConstantTerm(DomainError):
    pass


class NonunitConstantTerm(DomainError):
    pass


class NotPLocal(DomainError):
    def __init__(self, index, coefficient, p):
        self.index = index
        self.coefficient = coefficient
        self.p = p
        super().__init__(
            f"coefficient {coefficient} at index {index} is not {p}-local")


class NotPLocalRing(DomainError):
    pass


class NotAUnit(DomainError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"ghost component {index} = {value} is not a unit")


class NonIntegralGhost(DomainError):
    def __init__(self, index):
        self.index = index
        super().__init__(
            f"ghost tuple is not in the image: division by {index} fails")


class InsufficientPrecision(DomainError):
    pass


class CapExceeded(DomainError):
    pass


class NonTerminatingReduction(DomainError):
    pass


class NotMonomialIdeal(DomainError):
    pass


class InfiniteLength(DomainError):
    pass


class IntegralityFailure(VerificationFailure):
    """A universal polynomial came out with a forbidden denominator."""
