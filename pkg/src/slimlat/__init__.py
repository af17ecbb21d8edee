"""Planar semimodular lattice diagrams: rectangular extensions, multifork
construction sequences, trajectory coloring and the swing decision procedure.
"""

from .diagram import (
    BoundaryChains,
    Diagram,
    Edge,
    FourCell,
    GluedSumDecomposition,
    parse_diagram,
)
from .errors import (
    IncompatibleTriplet,
    InconsistencyError,
    LatticeError,
    NotDistributiveCell,
    NotIncomparable,
    NotIndecomposable,
    NotPartialOrder,
    NotSlim,
    NotSlimRectangular,
    NuDomainError,
    ParseError,
    TooSmall,
    ValidationError,
)

__all__ = [
    "BoundaryChains",
    "Diagram",
    "Edge",
    "FourCell",
    "GluedSumDecomposition",
    "parse_diagram",
    "IncompatibleTriplet",
    "InconsistencyError",
    "LatticeError",
    "NotDistributiveCell",
    "NotIncomparable",
    "NotIndecomposable",
    "NotPartialOrder",
    "NotSlim",
    "NotSlimRectangular",
    "NuDomainError",
    "ParseError",
    "TooSmall",
    "ValidationError",
]

__version__ = "0.1.0"
