"""Exception types raised by strop operations.

Validation routines return reports instead of raising; exceptions are
reserved for violated preconditions and malformed input documents.
"""


class StropError(Exception):
    """Base class for all strop errors."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MalformedCarrier(StropError):
    pass


class MalformedDocument(StropError):
    pass


class AxiomViolation(StropError):
    pass


class ForeignElement(StropError):
    pass


class NotMultiplicative(StropError):
    pass


class NotOrderCompatible(StropError):
    pass


class BadRank(StropError):
    pass


class NotHomomorphism(StropError):
    pass


class GhostSetMismatch(StropError):
    pass


class HypothesisViolation(StropError):
    pass


class NotSubsemiring(StropError):
    pass


class Unsupported(StropError):
    pass


class InfiniteUnsupported(Unsupported):
    pass


class LawViolation(StropError):
    pass


class TargetNotCancellative(StropError):
    pass


class NotSurjective(StropError):
    pass


class NotIdeal(StropError):
    pass


class NotSubmonoid(StropError):
    pass


class NotInStabilizer(StropError):
    pass


class GhostsNotContained(StropError):
    pass


class TangiblesNotClosed(StropError):
    pass


class FiberViolation(StropError):
    pass


class PhiNotOrderCompatible(StropError):
    pass


class PhiNotHomomorphic(StropError):
    pass


class FiberMismatch(StropError):
    pass


class NotRefinement(StropError):
    pass


class NotTE(StropError):
    pass


class NotSaturated(StropError):
    pass


class NotProper(StropError):
    pass


class TooLarge(StropError):
    pass


class NotGroupLike(StropError):
    pass


class DivisionByZeroFunction(StropError):
    pass


class GhostPartNotIdentity(StropError):
    pass


class UnsupportedGamma(Unsupported):
    pass
