"""Exception hierarchy shared by every module of the package."""


class ZpsError(Exception):
    """Base class for all library errors."""


class CompositeModulusBase(ZpsError, ValueError):
    """The requested ring or field base is not a prime."""


class RingOverflow(ZpsError, OverflowError):
    """p**s does not fit a signed 64-bit integer."""


class ZeroInput(ZpsError, ValueError):
    pass


class DigitOutOfRange(ZpsError, ValueError):
    pass


class WrongLength(ZpsError, ValueError):
    pass


class DimensionMismatch(ZpsError, ValueError):
    pass


class RingMismatch(ZpsError, ValueError):
    pass


class ShapeError(ZpsError, ValueError):
    pass


class TooLarge(ZpsError):
    """A desk-scale cost guard was exceeded."""


class FieldDivisionByZero(ZpsError, ZeroDivisionError):
    pass


class FieldMismatch(ZpsError, ValueError):
    pass


class BadParameters(ZpsError, ValueError):
    pass


class BaseNotMRD(ZpsError, ValueError):
    pass


class MissingZero(ZpsError, ValueError):
    pass


class TooFewWords(ZpsError, ValueError):
    pass


class ParseError(ZpsError, ValueError):
    """Malformed matrix or code file; the message names the offending field."""


class DuplicateWord(ParseError):
    pass


class NotAClique(ZpsError, ValueError):
    pass


class NotMaximum(ZpsError, ValueError):
    pass


class UnclassifiableSet(ZpsError):
    """A maximum clique matched neither the row nor the column form."""
