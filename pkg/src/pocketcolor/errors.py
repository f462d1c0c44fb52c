"""Exception types shared across the toolkit."""


class PocketColorError(Exception):
    """Base class for all toolkit errors."""


class ParseError(PocketColorError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {column}" if column is not None else "") + ")"
        super().__init__(message + loc)


class SelfLoopError(ParseError):
    pass


class VertexIdGap(ParseError):
    pass


class SizeLimitExceeded(PocketColorError):
    pass


class GirthViolation(PocketColorError):
    pass


class PathTooLong(PocketColorError):
    pass


class EmbeddingRequired(PocketColorError):
    pass


class NotConnected(PocketColorError):
    pass


class DegreeTooHigh(PocketColorError):
    pass


class NotASubgraph(PocketColorError):
    pass


class ExtensionFailed(PocketColorError):
    """A pocket could not be recolored during stage extension.

    This only fires when a deletability certificate was wrong; it is an
    internal invariant violation and carries diagnostics.
    """

    def __init__(self, message, pocket=None, lists=None, stage=None):
        self.pocket = pocket
        self.lists = lists
        self.stage = stage
        super().__init__(message)


class NoColoringExists(PocketColorError):
    """Raised by CLI paths; the engine itself returns None instead."""


class MaxRoundsExceeded(PocketColorError):
    pass


class InformationBoundViolation(PocketColorError):
    pass


class TamperedTrace(PocketColorError):
    pass


class DegreeBoundViolated(PocketColorError):
    pass


class UnknownFamily(PocketColorError):
    pass
