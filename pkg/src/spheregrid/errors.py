"""Exception hierarchy.

Every error raised by the library derives from SpheregridError so callers
(and the CLI) can distinguish domain errors from bugs.
"""


class SpheregridError(Exception):
    """Base class for all library errors."""


# grid
class UnknownGridName(SpheregridError):
    def __init__(self, name):
        super().__init__(f"unknown grid name: {name!r}")
        self.name = name


class InvalidSpec(SpheregridError):
    pass


class IndexOutOfRange(SpheregridError):
    pass


class NotOnUnitSphere(SpheregridError):
    pass


# partition
class InvalidDistribution(SpheregridError):
    pass


class TooManyParts(SpheregridError):
    pass


# parallel
class InvalidRank(SpheregridError):
    pass


class DeadlockDetected(SpheregridError):
    pass


class UnconsumedMessages(SpheregridError):
    pass


# field
class DuplicateName(SpheregridError):
    pass


class AlreadyAllocated(SpheregridError):
    pass


class NoDevice(SpheregridError):
    pass


class StaleHost(SpheregridError):
    pass


class StaleDevice(SpheregridError):
    pass


class ShapeMismatch(SpheregridError):
    pass


# functionspace
class InconsistentMesh(SpheregridError):
    pass


class PlanMismatch(SpheregridError):
    pass


# interp
class DegenerateTriangle(SpheregridError):
    pass


class NotLocated(SpheregridError):
    def __init__(self, message, target_global_index=None):
        super().__init__(message)
        self.target_global_index = target_global_index


# runtime
class DoubleInitialise(SpheregridError):
    pass
