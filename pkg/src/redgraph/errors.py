"""Domain errors raised across the package.

Construction-time invariant violations (bad lengths, unordered breakpoints,
discontinuous data) raise plain ``ValueError``; the classes below mark
failures of mathematical preconditions so callers can tell them apart.
"""


class RedgraphError(ValueError):
    """Base class for domain errors raised by redgraph operations."""


class GraphMismatchError(RedgraphError):
    """Objects that must live on the same graph do not."""


class MassImbalanceError(RedgraphError):
    """A measure has the wrong total mass for the requested operation."""


class ModelInconsistencyError(RedgraphError):
    """Declared degree of a special-fiber model disagrees with its components."""


class ZeroDegreeError(RedgraphError):
    """An operation requiring positive degree was given degree <= 0."""


class LabelMapError(RedgraphError):
    """A relabeling map does not cover the support of a measure."""


class EmptySampleError(RedgraphError):
    """An orbit sample with no points cannot define a measure."""


class NotACircleError(RedgraphError):
    """A circle-only diagnostic was applied to a different graph."""
