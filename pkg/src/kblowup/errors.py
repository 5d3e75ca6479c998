"""Exception types shared across the package."""


class KBlowupError(Exception):
    """Base class for every error raised by kblowup."""


class DivisionByZero(KBlowupError, ZeroDivisionError):
    pass


class GridExhausted(KBlowupError):
    pass


class LatticeOverflow(KBlowupError):
    """An exponent left the quarter-integer lattice."""


class PoleDetected(KBlowupError):
    def __init__(self, order, message=None):
        self.order = order
        super().__init__(message or f"pole of order {order} at eps=0")


class CellOutOfDiagram(KBlowupError):
    pass


class CancellationFailure(KBlowupError):
    pass


class ZeroWeight(KBlowupError):
    pass


class RangeViolation(KBlowupError):
    pass


class SingularSystem(KBlowupError):
    pass


class NonInvertible(KBlowupError):
    pass


class ConfigError(KBlowupError):
    pass


class CacheCorrupt(KBlowupError):
    pass
