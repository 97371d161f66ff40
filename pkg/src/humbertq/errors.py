"""Exception hierarchy shared by every numerics module."""


class HumbertQError(ValueError):
    """Base class for all errors raised by humbertq."""


class PoleError(HumbertQError):
    """A parameter sits on a pole of a gamma or Pochhammer denominator."""


class DomainError(HumbertQError):
    """Arguments outside the domain where the requested formula is defined."""


class UnsupportedOrderError(DomainError):
    """The order offset mu1 - mu2 is not an integer."""


class ConvergenceError(HumbertQError):
    """A series or quadrature hit its term/evaluation cap.

    ``best`` carries the last partial result so callers can still inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
