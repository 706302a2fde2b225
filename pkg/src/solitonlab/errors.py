"""Exception types shared across the package."""


class SolitonLabError(Exception):
    """Base class for all package errors."""


class UnboundField(SolitonLabError, KeyError):
    pass


class GridMismatch(SolitonLabError, ValueError):
    pass


class UnknownModel(SolitonLabError, ValueError):
    pass


class UnsupportedBoundary(SolitonLabError, ValueError):
    pass


class BoundaryViolation(SolitonLabError, ValueError):
    """A decaying field is not small enough at the edges of its grid."""


class BlowupDetected(SolitonLabError, RuntimeError):
    pass


class PoleOnGrid(SolitonLabError, ValueError):
    pass


class PoleOnRange(SolitonLabError, ValueError):
    pass


class BranchViolation(SolitonLabError, ValueError):
    """Argument of a logarithm left the positive axis."""


class DegenerateParameters(SolitonLabError, ValueError):
    pass


class DenominatorZero(SolitonLabError, ValueError):
    pass


class SingularSurface(SolitonLabError, ValueError):
    pass


class NoResidualMinimum(SolitonLabError, RuntimeError):
    pass


class SingularA(SolitonLabError, ArithmeticError):
    pass


class IllConditioned(SolitonLabError, ArithmeticError):
    pass


class TruncationTooTight(SolitonLabError, ValueError):
    pass


class ConfigError(SolitonLabError, ValueError):
    pass
