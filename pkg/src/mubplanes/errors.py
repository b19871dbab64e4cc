"""Exception hierarchy shared by all modules."""


class MubError(Exception):
    """Base class for every error raised by this package."""


# fields
class NonPrime(MubError, ValueError):
    pass


class ReduciblePolynomial(MubError, ValueError):
    pass


class DegreeMismatch(MubError, ValueError):
    pass


class FieldMismatch(MubError, ValueError):
    pass


class DivisionByZero(MubError, ZeroDivisionError):
    pass


class NoSelfDualBasis(MubError, ValueError):
    pass


class MalformedTable(MubError, ValueError):
    pass


# cyclotomic integers
class RootMismatch(MubError, ValueError):
    pass


class LengthMismatch(MubError, ValueError):
    pass


# geometry
class DimensionMismatch(MubError, ValueError):
    pass


class InvalidSpreadSet(MubError, ValueError):
    pass


class MembersNotInSpread(MubError, ValueError):
    pass


class NotCommutative(MubError, ValueError):
    pass


class ZeroDivisor(MubError, ValueError):
    pass


class TooLarge(MubError, ValueError):
    pass


class NotIsotropic(MubError, ValueError):
    pass


class NotSingular(MubError, ValueError):
    pass


# families
class BadDegree(MubError, ValueError):
    pass


class BadParameters(MubError, ValueError):
    pass


class NotPlanar(MubError, ValueError):
    pass


class WrongCharacteristic(MubError, ValueError):
    pass


class WrongProvenance(MubError, ValueError):
    pass


class ParseError(MubError, ValueError):
    """Malformed input file; ``lineno`` is 1-based (0 when unknown)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)
