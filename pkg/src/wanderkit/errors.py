"""Exception taxonomy shared across the toolkit."""


class WanderkitError(Exception):
    """Base class for all toolkit errors."""


class DegenerateGeometryError(WanderkitError):
    """Input geometry does not determine the requested quantity (e.g. all
    points coincide, so no alignment exists)."""


class UndefinedMetricError(WanderkitError):
    """A metric has no defined value on this input (e.g. every camera pair
    has zero relative translation)."""


class EmptyNavmeshError(WanderkitError):
    """Baking produced no walkable triangles."""


class UnreachableError(WanderkitError):
    """Path endpoints lie in different connected navmesh regions."""


class InvalidEndpointError(WanderkitError):
    """A query point is too far from the navmesh to be snapped onto it."""


class SamplingFailureError(WanderkitError):
    """Rejection sampling exhausted its attempt budget."""


class DataFormatError(WanderkitError):
    """A file failed to parse or violates its format contract."""
