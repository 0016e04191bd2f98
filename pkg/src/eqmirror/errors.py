"""Exception types raised across the package."""


class EqMirrorError(Exception):
    """Base class for all package errors."""


class DivByZero(EqMirrorError, ZeroDivisionError):
    pass


class PoleAtPoint(EqMirrorError, ZeroDivisionError):
    """A substitution or limit hit a genuine pole."""

    def __init__(self, bindings, expr=""):
        self.bindings = dict(bindings)
        self.expr = expr
        where = ", ".join(f"{k}={v}" for k, v in self.bindings.items())
        super().__init__(f"pole of {expr} at {where}" if expr else f"pole at {where}")


class NonUnitLeading(EqMirrorError, ZeroDivisionError):
    """Series division by a series whose constant term is zero."""


class UnnormalizedMirrorMap(EqMirrorError, ValueError):
    pass


class NotARoot(EqMirrorError, ValueError):
    pass


class ZeroWeightExpansion(EqMirrorError, ValueError):
    pass


class SingularFactor(EqMirrorError, ZeroDivisionError):
    pass


class DegenerateBasis(EqMirrorError, ValueError):
    pass


class WindowExhausted(EqMirrorError, ArithmeticError):
    pass


class NotInterpolable(EqMirrorError, ValueError):
    pass


class DegenerateWeights(EqMirrorError, ValueError):
    pass


class SpecError(EqMirrorError, ValueError):
    """Malformed toric spec; ``field`` names the offending entry."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
