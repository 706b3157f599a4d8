"""Exception hierarchy shared by every module of the package."""


class UrysohnError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(UrysohnError, ValueError):
    """Invalid operator, identifier or experiment configuration."""


class InputError(UrysohnError, ValueError):
    """Invalid data handed to an otherwise valid object."""


class MetricError(InputError):
    """The error measure is undefined for the supplied sequences."""


class NumericError(UrysohnError, ArithmeticError):
    """A computation produced non-finite values."""


class FormatError(UrysohnError, ValueError):
    """Malformed model or data file.

    ``offset`` is the byte offset into the stream where parsing failed.
    """

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset
