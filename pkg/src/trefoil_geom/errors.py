"""Exception hierarchy shared by every module."""


class GeometryError(ValueError):
    """Base class for all domain errors raised by trefoil_geom."""


class OutOfRange(GeometryError):
    """A parameter lies outside the range where the construction exists."""


class OutOfDomain(GeometryError):
    """A point lies outside the chart or model domain."""


class Degenerate(GeometryError):
    """The construction degenerates (zero denominator, ideal point, ...)."""


class NilRegime(Degenerate):
    """The curved constructor was called at (or numerically at) alpha = pi/6."""


class NotRepresentable(GeometryError):
    """The value has no integral/rational Seifert representation."""


class NotApplicable(GeometryError):
    """The quantity is not defined for this family (e.g. p = 0)."""


class Undefined(GeometryError):
    """The quantity is undefined for this geometry class."""


class ConstructionMismatch(GeometryError):
    """Two independent construction routes disagree beyond tolerance."""
