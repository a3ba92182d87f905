"""Exception types shared across the package."""


class ConePdaError(Exception):
    """Base class for all errors raised by conepda."""


class FrontierEscape(ConePdaError):
    """A path left the explored region of a lazily built graph."""

    def __init__(self, vertex, message=None):
        self.vertex = vertex
        super().__init__(message or f"path reached unexpanded vertex {vertex!r}")


class ResourceLimit(ConePdaError):
    """Graph expansion exceeded the configured vertex cap."""


class NotSymmetric(ConePdaError):
    pass


class NotConnected(ConePdaError):
    pass


class NotDeterministic(ConePdaError):
    pass


class NotCertified(ConePdaError):
    """A cone table was needed but classification did not certify."""


class InsufficientDepth(ConePdaError):
    pass


class EmptyImage(ConePdaError):
    pass


class InvalidTable(ConePdaError):
    pass


class EmptyLanguage(ConePdaError):
    pass


class InvalidDerivation(ConePdaError):
    pass


class NotInLanguage(ConePdaError):
    pass


class LanguageMismatch(ConePdaError):
    pass


class NotWellDefined(ConePdaError):
    pass


class ParseError(ConePdaError):
    """Malformed text input (alphabet, graph, PDA, grammar or backend line)."""
