"""Exception types shared across the package."""


class GraphSplinesError(Exception):
    """Base class for every error raised by this library."""


# --- rings / exact linear algebra ---------------------------------------

class RingMismatch(GraphSplinesError):
    """Operands belong to different coefficient rings."""


class InvalidModulus(GraphSplinesError):
    """A modulus was not prime (or not >= 2) where required."""


class UnsupportedRing(GraphSplinesError):
    """The requested computation is not available for this ring family."""


# --- graphs ---------------------------------------------------------------

class Disconnected(GraphSplinesError):
    """The graph is not connected."""


class CycleContraction(GraphSplinesError):
    """The chosen edge set contains a loop or spans a cycle."""


class NotComposable(GraphSplinesError):
    """Contraction codomain/domain do not match."""


class BadStructure(GraphSplinesError):
    """A rooted plane structure is inconsistent with its graph."""


# --- spline modules -------------------------------------------------------

class ShapeMismatch(GraphSplinesError):
    """A value tuple has the wrong length or shape."""


class BadVertex(GraphSplinesError):
    """A vertex index is out of range."""


class BadContraction(GraphSplinesError):
    """A contraction failed validation."""


class NotATree(GraphSplinesError):
    """The graph has nonzero genus where a tree is required."""


class GraphMismatch(GraphSplinesError):
    """Two objects refer to different graphs."""


class TooSmall(GraphSplinesError):
    """The graph has fewer vertices than the operation requires."""


# --- decomposition --------------------------------------------------------

class NotCutVertex(GraphSplinesError):
    """The vertex does not separate the graph."""


class BadOrder(GraphSplinesError):
    """A vertex order violates the preconditions of a flow-up construction."""


class NotABridgePath(GraphSplinesError):
    """A path edge is not a bridge, or the path interior is not isolated."""


class NotDegreeTwoPath(GraphSplinesError):
    """An interior path vertex does not have degree exactly two."""


# --- Dyck series ----------------------------------------------------------

class NotDyck(GraphSplinesError):
    """A word is not a properly nested, label-matched parenthesis word."""


class ModeMismatch(GraphSplinesError):
    """The series mode is incompatible with the coefficient ring."""


class NoClosedForm(GraphSplinesError):
    """No closed form is known for this (ring, label set) shape."""


class PrefixTooShort(GraphSplinesError):
    """The series prefix is too short for the requested relation degrees."""


# --- internal cross-checks -------------------------------------------------

class ConsistencyError(GraphSplinesError):
    """Two independent computation paths disagreed; indicates a bug."""
