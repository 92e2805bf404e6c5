"""Exception types shared across the package."""


class GapbasisError(Exception):
    """Base class for all domain errors."""


class EqualNodesError(GapbasisError):
    """inc(s, s) is undefined."""


class BadPermutationError(GapbasisError):
    """Argument is not a bijection of {0, ..., n-1}."""


class BadDirectionError(GapbasisError):
    """A tree direction is outside the ambient alphabet."""


class BadAlphabetError(GapbasisError):
    """A node uses letters outside the expected alphabet."""


class DimensionMismatchError(GapbasisError):
    """Alphabet sizes or color counts of the arguments do not line up."""


class NotAnNGapError(GapbasisError):
    """Operation requires a gap function whose range covers all n colors."""


class PsiDomainError(GapbasisError):
    """Branch function is not total on ordered distinct pairs, or maps into A."""


class InvalidTypeError(GapbasisError):
    """The n-type violates one of its structural invariants."""


class TraceMismatchError(GapbasisError):
    """Derivation trace does not belong to the given type/gap function."""


class Condition1ViolatedError(GapbasisError):
    """Gap function has empty pbranch but fails the mutual-attachment condition."""


class TooSmallError(GapbasisError):
    """Node set too small to classify (need at least two nodes)."""


class TooSmallNError(GapbasisError):
    """Operation needs at least three colors."""


class CorruptCacheError(GapbasisError):
    """On-disk catalog cache could not be parsed or has a stale version."""
