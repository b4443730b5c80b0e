"""Exception hierarchy shared by all wsic modules."""


class WsicError(Exception):
    """Base class for every error raised by this package."""


class ParseError(WsicError):
    """An instance, code, or codeword document is malformed."""


class NoInverse(WsicError):
    """Zero has no multiplicative inverse."""


class InvalidQuery(WsicError):
    """A row-space membership query was posed with inconsistent indices."""


class DimensionError(WsicError):
    """Operands disagree on field order, width, or message count."""


class RangeError(WsicError):
    """A codeword slice reaches past the end of the codeword."""


class SenderSupportError(WsicError):
    """A symbol uses a message its sender does not hold."""


class InvalidPartition(WsicError):
    """A requested split of the common message block is not a subset of it."""


class InvalidSubcode(WsicError):
    """A supplied sub-code fails decodability or security for its sub-problem."""


class PreconditionError(WsicError):
    """The structural precondition of a composition scheme does not hold."""


class ConstructionFailure(WsicError):
    """No composition scheme produced a verified code."""

    def __init__(self, message: str, diagnostics: dict[str, str] | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class SearchBudgetError(WsicError):
    """An exhaustive search would exceed its enumeration budget."""


class OracleBudgetError(WsicError):
    """The brute-force security oracle would exceed its enumeration budget."""


class CertificationInputError(WsicError):
    """Optimality certification was asked about an unverified code."""
