"""Exception hierarchy for powgraph."""


class PowGraphError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpec(PowGraphError, ValueError):
    """A group spec, graph file or profile file is malformed."""


class TableNotGroup(InvalidSpec):
    """A multiplication table fails the group axioms."""


class EmptySet(PowGraphError, ValueError):
    pass


class StructureError(PowGraphError):
    """The input graph is not the power graph of any group."""


class NotFiniteOrderComponent(StructureError):
    """The graph has no universal vertex, so it cannot be a finite-order component."""


class SizeMismatch(StructureError):
    """Tower block sizes cannot tile the vertex set of a class."""


class NotAnEquivClass(PowGraphError, ValueError):
    pass


class ProfileInconsistent(PowGraphError, ValueError):
    pass


class IdentityArgument(PowGraphError, ValueError):
    pass


class WindowTooSmall(PowGraphError):
    pass


class NotAlmostConnected(PowGraphError):
    pass


class ThresholdUndecided(PowGraphError):
    """Some guarded edge has an intersection count strictly between 0 and tau."""

    def __init__(self, message, edges=()):
        super().__init__(message)
        self.edges = list(edges)


class SizeLimit(PowGraphError):
    pass
