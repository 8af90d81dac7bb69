"""
Enumerations shared across packages
"""

from enum import Enum


class GraphFamily(str, Enum):
    """Named metric graph generators"""
    CIRCLE = "circle"
    TORUS = "torus"
    WEDGE = "wedge"
    HAWAIIAN = "hawaiian"
    SEGMENT = "segment"
    STAR = "star"


class Subcommand(str, Enum):
    """CLI subcommands"""
    SPECTRUM = "spectrum"
    COVER = "cover"
    GENERATORS = "generators"
    GH = "gh"
    DEMO = "demo"


class MoveKind(str, Enum):
    """Basic moves of the chain calculus"""
    INSERT = "insert"
    REMOVE = "remove"


class VerdictKind(str, Enum):
    """Tri-state nullity verdict"""
    NULL = "null"
    NOT_NULL = "not_null"
    UNKNOWN = "unknown"


class Certainty(str, Enum):
    """Whether a reported value is fully certificate-backed"""
    CERTAIN = "certain"
    HEURISTIC = "heuristic"


class GroupKind(str, Enum):
    """Recognised structure of a simplified presentation"""
    TRIVIAL = "trivial"
    FREE = "free"
    ABELIAN = "abelian"
    UNKNOWN = "unknown"


class Equivalence(str, Enum):
    """Outcome of comparing two essential triads"""
    EQUIVALENT = "equivalent"
    DISTINCT = "distinct"
    HEURISTIC_EQUAL = "heuristic_equal"
