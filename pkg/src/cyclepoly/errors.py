"""Exception hierarchy.

Everything raised on bad input derives from :class:`ValidationError`, which is
also a ``ValueError``. The CLI maps the three top-level families onto distinct
exit codes.
"""


class CyclePolyError(Exception):
    pass


class ValidationError(CyclePolyError, ValueError):
    pass


class ParseError(CyclePolyError):
    pass


class InvariantViolation(CyclePolyError):
    """A computed result broke an invariant that should hold by construction."""


class NegativeWeight(ValidationError):
    pass


class NonFiniteWeight(ValidationError):
    pass


class SelfLoop(ValidationError):
    pass


class DuplicateEdge(ValidationError):
    pass


class VertexOutOfRange(ValidationError):
    pass


class ZeroTotalWeight(ValidationError):
    pass


class VertexNotInGraph(ValidationError):
    pass


class EdgeNotInGraph(ValidationError):
    pass


class BadPathLength(ValidationError):
    pass


class BadCycleLength(ValidationError):
    pass


class IdenticalEdges(ValidationError):
    pass


class IdenticalVertices(ValidationError):
    pass


class NegativeMass(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class EmptySupport(ValidationError):
    pass


class TooFewVertices(ValidationError):
    pass


class NotStationary(UserWarning):
    """Issued when a certificate is built for a weight function that fails the stationarity check."""
