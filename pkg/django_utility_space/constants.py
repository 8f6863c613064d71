"""Types and constants for the django_utility_space package."""

import enum

# Numerical tolerances.
#
# INDIFFERENCE_TOL: a raw utility whose projection on H is at most this long is indifferent.
# TIE_TOL: canonical coordinates closer than this share a tier.
# CONE_TOL: residual below which a point is accepted as a member of a cone.
# PREFERENCE_TOL: band around zero in which two lotteries are equally good.
# ORACLE_TOL: how negative <v, delta> must be to count as a broken unanimity.
INDIFFERENCE_TOL = 1e-9
TIE_TOL = 1e-9
CONE_TOL = 1e-9
PREFERENCE_TOL = 1e-12
ORACLE_TOL = 1e-9
DEGENERATE_MEAN_TOL = 1e-12

# Exact Mallows normalisation enumerates m! orders.
MALLOWS_MAX_M = 8

# Agents are generated in blocks, each block from its own random substream.
BLOCK_SIZE = 4096

# Smallest accepted resolution for the unanimity oracle grid.
MIN_GRID_RESOLUTION = 16

# Significant digits used for numbers in records and printed distances.
RECORD_DIGITS = 17
PRINT_DIGITS = 12


class Ordering(enum.Enum):
    """How a lottery M compares to a lottery L for a given agent.

    LESS_PREFERRED: M is strictly worse than L.
    INDIFFERENT: M and L are equally good.
    MORE_PREFERRED: M is strictly better than L.
    """

    LESS_PREFERRED = -1
    INDIFFERENT = 0
    MORE_PREFERRED = 1

    def reversed(self) -> "Ordering":
        """Return the ordering with the roles of L and M swapped."""
        return Ordering(-self.value)


class CellKind(enum.Enum):
    """The permutohedron cell a preference order belongs to."""

    FACET = "Facet"
    EDGE = "Edge"
    VERTEX = "Vertex"
    OTHER = "Other"


# Records use this label for the indifference point instead of a cell kind.
INDIFFERENCE_LABEL = "Indifference"


class CultureKind(enum.Enum):
    """The probability models available for generating populations."""

    UNIFORM = "uniform"
    VMF = "vmf"
    MALLOWS = "mallows"


class MallowsMethod(enum.Enum):
    """Exact sampling strategies for the Mallows model."""

    INSERTION = "insertion"
    ENUMERATION = "enumeration"


class Metric(enum.Enum):
    """Metrics exposed by the distance command."""

    ROUND = "round"
    CUBE3 = "cube3"


class RecordFormat(enum.Enum):
    """File formats for generated populations."""

    JSONL = "jsonl"
    CSV = "csv"
