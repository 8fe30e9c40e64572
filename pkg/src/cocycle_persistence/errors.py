"""Exception hierarchy shared by the whole package.

Every error carries a stable ``code`` string so the service and the CLI can
report machine-readable failures.
"""


class TopologyError(Exception):
    """Base class for all domain errors."""

    code = "TopologyError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class InvalidVertexId(TopologyError):
    code = "InvalidVertexId"


class EmptyInput(TopologyError):
    code = "EmptyInput"


class OrderViolatesConditionA(TopologyError):
    """The cell order places a cell before one of its faces."""

    code = "OrderViolatesConditionA"


class NonMonotoneFiltration(TopologyError):
    """A face was assigned a later stage than one of its cofaces."""

    code = "NonMonotoneFiltration"


class MissingVertexValue(TopologyError):
    code = "MissingVertexValue"


class MissingEdgeValue(TopologyError):
    code = "MissingEdgeValue"


class DisconnectedWithSingleBase(TopologyError):
    code = "DisconnectedWithSingleBase"


class NonGenericMap(TopologyError):
    """Vertex values collide where the construction needs them distinct."""

    code = "NonGenericMap"


class BadInterval(TopologyError):
    code = "BadInterval"


class SpanTooWide(TopologyError):
    """A simplex maps onto an arc of at least half the circle; subdivide first."""

    code = "SpanTooWide"


class VertexOnLevel(TopologyError):
    code = "VertexOnLevel"


class NotUpperTriangular(TopologyError):
    code = "NotUpperTriangular"


class OrderNotFiltrationCompatible(TopologyError):
    code = "OrderNotFiltrationCompatible"


class BlocksOverlap(TopologyError):
    """The shared block of the two relative matrices disagrees."""

    code = "BlocksOverlap"


class NotASubcomplex(TopologyError):
    code = "NotASubcomplex"


class BoundaryNotSquareZero(TopologyError):
    code = "BoundaryNotSquareZero"


class UnderDetermined(TopologyError):
    """Not enough known collections to fill the exact sequence."""

    code = "UnderDetermined"


class Contradiction(TopologyError):
    """The given dimensions cannot come from an exact sequence."""

    code = "Contradiction"


class InvalidCocycle(TopologyError):
    """The edge values fail the cocycle condition on some triangle."""

    code = "InvalidCocycle"


class NotAlmostIntegral(TopologyError):
    """Some cycle sum is not an integer multiple of the given period."""

    code = "NotAlmostIntegral"


class ParseError(TopologyError):
    code = "ParseError"


class SchemaError(TopologyError):
    code = "SchemaError"


class OracleMismatch(TopologyError):
    """A cross-check requested with --check disagreed with the main pipeline."""

    code = "OracleMismatch"
