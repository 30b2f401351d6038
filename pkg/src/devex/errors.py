"""Exception types shared across the package."""


class DevexError(Exception):
    """Base class for all errors raised by this package."""


class NonPositiveProbability(DevexError):
    """A probability entry is zero or negative."""


class NotNormalized(DevexError):
    """Probabilities do not sum to 1 within the input tolerance."""


class DuplicateLabel(DevexError):
    """Alphabet labels are not pairwise distinct."""


class AlphabetMismatch(DevexError):
    """Two distributions do not share one alphabet."""


class DomainError(DevexError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateIncrements(DevexError):
    """Identical hypotheses: all martingale increments vanish, gamma is 0/0."""


class OutOfDomain(DevexError):
    """A rate or parameter falls outside the representable range."""


class NoConvergence(DevexError):
    """An iterative solver failed to reach its tolerance."""


class InadmissibleThresholds(DevexError):
    """Erasure thresholds violate the admissibility window for the pair."""


class NotBinary(DevexError):
    """Operation requires an alphabet of exactly two symbols."""
