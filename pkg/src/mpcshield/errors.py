"""Exception types raised across the package."""


class MpcShieldError(Exception):
    """Base class for every error raised by mpcshield."""


# algebra
class ModulusMismatch(MpcShieldError, ValueError):
    pass


class ZeroInverse(MpcShieldError, ZeroDivisionError):
    pass


class DivisionByZeroPolynomial(MpcShieldError, ZeroDivisionError):
    pass


class DuplicateAbscissa(MpcShieldError, ValueError):
    pass


class NonSquare(MpcShieldError, ValueError):
    pass


class IndexOutOfRange(MpcShieldError, IndexError):
    pass


class SingularSystem(MpcShieldError, ArithmeticError):
    """Raised when a linear system has no unique solution.

    ``inconsistent`` is True when no solution exists at all and False when
    the system is underdetermined (infinitely many solutions).
    """

    def __init__(self, message: str, inconsistent: bool):
        super().__init__(message)
        self.inconsistent = inconsistent


# coding
class LengthMismatch(MpcShieldError, ValueError):
    pass


class Undecodable(MpcShieldError):
    pass


# sharing
class InvalidParams(MpcShieldError, ValueError):
    pass


class InsufficientShares(MpcShieldError, ValueError):
    pass


class DuplicateOwner(MpcShieldError, ValueError):
    pass


class TargetInHelperSet(MpcShieldError, ValueError):
    pass


class DuplicateHelper(MpcShieldError, ValueError):
    pass


# protocol
class TooFewPlayers(MpcShieldError, ValueError):
    pass


class ProtocolAbort(MpcShieldError):
    pass


class BadHelperSet(MpcShieldError, ValueError):
    pass


class MissingPortion(MpcShieldError):
    pass


class MissingSigma(MpcShieldError):
    pass


class InsufficientHelpers(MpcShieldError):
    pass


# simnet
class UnknownPlayer(MpcShieldError, KeyError):
    pass


class MixedRounds(MpcShieldError, ValueError):
    pass


# cli
class ParseError(MpcShieldError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(MpcShieldError, ValueError):
    pass
