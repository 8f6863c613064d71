"""Exceptions raised by the django_utility_space package.

Every error is a ValueError, so callers that only care about bad input can
catch that, while the management commands and views catch UtilitySpaceError.
"""


class UtilitySpaceError(ValueError):
    """Base class for all errors raised by django_utility_space."""


class NonFiniteUtilityError(UtilitySpaceError):
    """A utility vector contains NaN or infinite entries."""


class DimensionError(UtilitySpaceError):
    """An operation was called with an unsupported number of candidates."""


class DimensionMismatchError(UtilitySpaceError):
    """Two objects refer to different numbers of candidates."""


class IndifferencePointError(UtilitySpaceError):
    """The indifference point was given where a point of the sphere is required."""


class IndifferenceCenterError(IndifferencePointError):
    """The center of a ball is the indifference point."""


class InvalidPermutationError(UtilitySpaceError):
    """A sequence is not a permutation of the candidates."""


class InvalidLotteryError(UtilitySpaceError):
    """A vector is not a lottery, or a bipoint is not in the tangent hyperplane."""


class NonStrictOrderError(UtilitySpaceError):
    """A strict order was required, but the order has ties."""


class NonStrictKeysError(NonStrictOrderError):
    """A histogram contains orders with ties."""


class SizeLimitError(UtilitySpaceError):
    """The number of candidates is too large for exact enumeration."""


class InvalidSpecError(UtilitySpaceError):
    """A culture specification is inconsistent."""


class EmptyPopulationError(UtilitySpaceError):
    """A statistic needs at least one point of the sphere."""


class DegenerateMeanError(UtilitySpaceError):
    """The mean resultant vector vanishes, so it has no direction."""


class InfiniteRatioError(UtilitySpaceError):
    """The reference ball is empty, so the density ratio is unbounded."""


class InvalidRadiusError(UtilitySpaceError):
    """A ball radius is outside (0, pi]."""
