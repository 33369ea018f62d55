"""Exception hierarchy shared by all modules."""


class RigidliftError(Exception):
    """Base class for all library errors."""


# -- graph construction ------------------------------------------------------

class LoopEdge(RigidliftError):
    pass


class Disconnected(RigidliftError):
    pass


class DuplicateEdgeId(RigidliftError):
    pass


class MissingBaseEdge(RigidliftError):
    pass


class NotTwoEdgeConnected(RigidliftError):
    pass


class NotTwoConnected(RigidliftError):
    pass


class BaseEdgeInArch(RigidliftError):
    pass


class NoCommonCycle(RigidliftError):
    pass


# -- divisors ----------------------------------------------------------------

class EnumerationBoundExceeded(RigidliftError):
    pass


class WrongDegree(RigidliftError):
    pass


# -- homology ----------------------------------------------------------------

class NotInCycleSpace(RigidliftError):
    pass


class NonIntegralClass(RigidliftError):
    pass


# -- orientations ------------------------------------------------------------

class BiorientedPresent(RigidliftError):
    pass


class InvalidMove(RigidliftError):
    pass


class DegreeMismatch(RigidliftError):
    pass


class DegreeTooHigh(RigidliftError):
    pass


class QIsEffective(RigidliftError):
    pass


# -- morphisms ---------------------------------------------------------------

class NotBijection(RigidliftError):
    pass


class BaseNotPreserved(RigidliftError):
    pass


class InvalidCyclicBijection(RigidliftError):
    pass


class GenusTooSmall(RigidliftError):
    pass


class MorphismIsRigid(RigidliftError):
    pass


class MorphismNotRigid(RigidliftError):
    pass


class AmbiguousTwoVertexExtension(RigidliftError):
    pass


class CompositionMismatch(RigidliftError):
    pass


# -- i/o ---------------------------------------------------------------------

class ParseError(RigidliftError):
    pass


class ValidationError(RigidliftError):
    pass


class InternalError(RigidliftError):
    """A verified invariant failed; indicates a bug, not bad input."""
