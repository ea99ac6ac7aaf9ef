"""Exception types raised across the package."""


class ToralError(Exception):
    """Base class for all errors raised by :mod:`toralcs`."""


class LatticeError(ToralError, ValueError):
    pass


class NotSymmetric(LatticeError):
    pass


class NotEven(LatticeError):
    pass


class Degenerate(LatticeError):
    pass


class SingularForm(ToralError, ValueError):
    pass


class NonConvergent(ToralError, ArithmeticError):
    pass


class GaugeDependence(ToralError, ValueError):
    """The quadratic phase of a quotient model depends on a gauge or harmonic direction."""


class InvalidPresentation(ToralError, ValueError):
    pass


class NonHalfInteger(ToralError, ValueError):
    pass


class IndexOutOfRange(ToralError, IndexError):
    pass


class RelationViolation(ToralError, ArithmeticError):
    pass


class SizeLimit(ToralError, RuntimeError):
    pass


class UnsupportedFamily(ToralError, ValueError):
    pass


class DecompositionFailure(ToralError, ArithmeticError):
    pass


class NotLagrangian(ToralError, ValueError):
    pass


class DimensionMismatch(ToralError, ValueError):
    pass
