"""Exception hierarchy shared by every module of the package."""


class ParryError(Exception):
    """Base class for all errors raised by parry_ac."""


class SpecSyntaxError(ParryError, ValueError):
    """A substitution spec document could not be parsed."""


class ExponentRangeError(ParryError, ValueError):
    """Negative exponent, ``m < 1`` or ``p < 0`` in a spec document."""


class ConstraintViolation(ParryError, ValueError):
    """A Parry exponent constraint does not hold.

    ``constraint`` names the failed condition, one of ``"alpha_0>=1"``,
    ``"alpha_l<=alpha_0"`` or the tail condition (``"alpha_{m-1}>=1"`` for
    simple substitutions, ``"alpha_l>=1 for some l in m..m+p-1"`` otherwise).
    """

    def __init__(self, constraint, message=None):
        self.constraint = constraint
        text = f"{constraint} does not hold"
        super().__init__(f"{text} ({message})" if message else text)


class ResourceLimit(ParryError, RuntimeError):
    """A configured cap (prefix length, state count) was exceeded."""


class NumericalFailure(ParryError, ArithmeticError):
    pass


class DigitRange(ParryError, ValueError):
    """A digit lies outside ``0..alpha_0``."""


class EmptyInput(ParryError, ValueError):
    """Evaluation was requested for the empty digit string (n = 0)."""


class ConstantsTooSmall(ParryError, RuntimeError):
    """The chosen L does not give enough expansion on factors of length L."""


class IndexOverflow(ParryError, RuntimeError):
    """A step transform needed a letter outside the expanded context window."""


class ShapeMismatch(ParryError, ValueError):
    pass
