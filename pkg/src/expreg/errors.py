"""Exception hierarchy shared by all models.

The CLI reports semantic failures by class name, so every error a user can
trigger is a distinct subclass of ``ExpregError``.
"""


class ExpregError(Exception):
    pass


class OutOfBounds(ExpregError):
    pass


class MarkerOverwrite(ExpregError):
    pass


class UnboundVariable(ExpregError):
    pass


class ColourOutOfRange(ExpregError):
    pass


class MissingMarkerColour(ExpregError):
    pass


class CapExceeded(ExpregError):
    pass


class NotTotalOrder(ExpregError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class PartitionViolation(ExpregError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class OracleBacked(ExpregError):
    pass


class AlreadyMarked(ExpregError):
    pass


class UnknownName(ExpregError):
    pass


class VisitBoundExceeded(ExpregError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class MarkerViolation(ExpregError):
    pass


class NonInflationaryUpdate(ExpregError):
    pass


class OrderViolation(ExpregError):
    pass


class NotWellFormed(ExpregError):
    pass


class InvalidModel(ExpregError):
    pass


class SafetyCapExceeded(ExpregError):
    pass


class MalformedTile(ExpregError):
    pass


class InvalidTiling(ExpregError):
    pass
