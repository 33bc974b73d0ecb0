"""Exception and warning types raised across the package."""


class CoreselError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteInput(CoreselError):
    """A feature matrix contains NaN or infinite values."""


class ZeroVectorUnderCosine(CoreselError):
    """A zero feature row cannot be normalized for the cosine metric."""


class DimensionMismatch(CoreselError):
    """Distance matrix and selection refer to different pool sizes."""


class SolverFailure(CoreselError):
    """A solver exceeded its pivot cap without proving optimality."""


class MasterInfeasible(CoreselError):
    """The relaxed master problem admits no feasible point."""


class TooLarge(CoreselError):
    """Brute-force enumeration would exceed the subset-count guard."""


class ParseError(CoreselError):
    """An input file could not be parsed; the message carries a location."""


class ShapeError(CoreselError):
    """An input file parsed but has inconsistent or empty dimensions."""


class IndexOutOfRange(CoreselError):
    """A selection index falls outside the pool."""


class DuplicateIndex(CoreselError):
    """A selection contains a repeated index."""


class IsolatedDuplicatePool(UserWarning):
    """All pool points coincide; a distance-based cut degenerates to eta >= 0."""
