"""Exception hierarchy shared by every module."""


class PadicError(ArithmeticError):
    """Base class for all errors raised by this package."""


class PrecisionExhausted(PadicError):
    """Cancellation consumed every known digit; retry at a higher precision.

    ``absolute_precision`` is the exponent A such that the lost value is only
    known to satisfy ``|x| <= p^-A``; ``index`` is the first orbit index whose
    norm became undetermined, when the error arises inside an orbit.
    """

    def __init__(self, message, *, absolute_precision=None, index=None):
        super().__init__(message)
        self.absolute_precision = absolute_precision
        self.index = index


class DivisionByZero(PadicError, ZeroDivisionError):
    pass


class DegreeTooSmall(PadicError, ValueError):
    """Dynamical operations need a polynomial of degree at least 2."""


class NotExact(PadicError):
    """An identity that needs exact Green values was handed an interval."""


class CertificateRequired(PadicError):
    """The operation is only meaningful on a certified disk."""


class InvariantViolated(PadicError, AssertionError):
    """A proven invariant failed; always an implementation bug.

    ``counterexample`` carries whatever data reproduces the failure.
    """

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
