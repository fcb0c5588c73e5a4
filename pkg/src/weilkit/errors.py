"""Exception hierarchy shared by every weilkit module."""


class WeilkitError(Exception):
    """Base class for all library errors."""


class NotMonic(WeilkitError, ValueError):
    pass


class NotSeparable(WeilkitError, ValueError):
    pass


class NotInvertible(WeilkitError, ArithmeticError):
    """Raised when inverting a non-unit.

    ``witness`` is a pair ``(g, h)`` of univariate coefficient lists with
    ``f = g*h`` and ``a*h == 0`` in the algebra, or ``None`` over a base field.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotGalois(WeilkitError):
    pass


class SearchExhausted(WeilkitError):
    """The bounded-height root search over QQ could not decide."""


class RingMismatch(WeilkitError, TypeError):
    pass


class DegreeBudgetExceeded(WeilkitError):
    pass


class NotWellDefined(WeilkitError):
    def __init__(self, message, generator=None):
        super().__init__(message)
        self.generator = generator


class NoRelativePresentation(WeilkitError):
    pass


class UnsupportedBaseChange(WeilkitError):
    pass


class NotIdempotent(WeilkitError):
    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


class RankMismatch(WeilkitError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class NotCompleteIntersection(WeilkitError):
    pass


class BudgetExceeded(WeilkitError):
    pass


class NotLocalAlgebra(WeilkitError):
    pass


class NonLocalTensor(WeilkitError):
    pass
