"""Exception hierarchy shared by every module."""


class SrsError(Exception):
    """Base class for all errors raised by this package."""


class NonReducedError(SrsError, ValueError):
    """The parameter has r_0 == 0."""


class BackendMismatchError(SrsError, TypeError):
    pass


class NotInteriorError(SrsError, ValueError):
    """The parameter is not in the interior of D_d (spectral radius >= 1)."""


class UndecidableError(SrsError):
    """A sign or comparison could not be resolved at the precision cap."""


class FloorAmbiguousError(UndecidableError):
    """Interval backend: the value is indistinguishable from an integer."""


class InconclusiveError(SrsError):
    """A computational cap was hit; this is never a mathematical verdict.

    ``cap`` names the limit that was exceeded and ``flag`` the CLI option
    that raises it.
    """

    def __init__(self, message, cap=None, flag=None):
        super().__init__(message)
        self.cap = cap
        self.flag = flag


class StepCapExceeded(InconclusiveError):
    pass


class PointCapExceeded(InconclusiveError):
    pass


class NotPisotError(SrsError, ValueError):
    """The polynomial does not define a Pisot number.

    ``witness`` holds the offending conjugate (an mpmath complex) when known.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
