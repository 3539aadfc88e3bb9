"""Exception types shared across the package."""


class OamNetError(Exception):
    """Base class for every error raised by this package."""


class DomainError(OamNetError, ValueError):
    """An argument is outside the declared domain (bad port, dimension, ...)."""


class NormalizationError(OamNetError, ValueError):
    """A state or amplitude vector is not normalized within tolerance."""


class BunchingError(OamNetError):
    """Two photons were driven onto an identical mode label.

    The distinguishable-slot model used here is exact only while photons
    occupy pairwise distinct labels; colliding them needs a full bosonic
    treatment, which is deliberately out of scope.
    """


class WindowOverflowError(OamNetError):
    """An operation pushed a winding number outside the configured window."""


class RoutingDomainError(DomainError):
    """A network received a state it is not wired to route."""


class DecompositionError(OamNetError, ValueError):
    """The synthesis target is not a unitary matrix."""
