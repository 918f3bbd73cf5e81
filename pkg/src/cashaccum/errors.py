"""Exception hierarchy shared by every module of the engine."""


class CashAccumError(ValueError):
    """Base class for all domain errors raised by cashaccum."""


class InvalidGrid(CashAccumError):
    pass


class InvalidMarket(CashAccumError):
    pass


class InvalidAccount(CashAccumError):
    pass


class InvalidGamma(InvalidAccount):
    pass


class InvalidOption(CashAccumError):
    pass


class SingularR(CashAccumError):
    """R(s) was requested at (or beyond) the terminal time where it vanishes."""


class NoConvergence(CashAccumError):
    pass


class GridMismatch(CashAccumError):
    pass


class NonPositivePrice(CashAccumError):
    pass


class ExpiredOption(CashAccumError):
    pass


class ParseError(CashAccumError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnknownKey(ParseError):
    pass


class MissingKey(ParseError):
    pass
