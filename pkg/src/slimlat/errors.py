"""Exception types shared across the package."""


class LatticeError(Exception):
    """Base class for all slimlat errors."""


class ParseError(LatticeError):
    """Malformed .slat input."""


class ValidationError(LatticeError):
    """Structure is not a valid planar lattice diagram."""


class NotIncomparable(LatticeError):
    """left/right queried for a comparable pair."""


class NotSlim(LatticeError):
    """Operation requires a slim diagram."""


class NotIndecomposable(LatticeError):
    """Operation requires a glued sum indecomposable diagram."""


class NotSlimRectangular(LatticeError):
    """Operation requires a slim rectangular diagram."""


class TooSmall(LatticeError):
    """Input has too few elements for the operation."""


class NuDomainError(LatticeError):
    """Eye-count map is positive outside a 4-cell bottom."""


class NotDistributiveCell(LatticeError):
    """Fork insertion targeted a non-distributive 4-cell."""


class InconsistencyError(LatticeError):
    """Two independent criteria that must agree disagreed (self-test)."""


class NotPartialOrder(LatticeError):
    """A relation that must be a partial order failed antisymmetry."""


class IncompatibleTriplet(LatticeError):
    """Placement weights do not fit the diagram."""
