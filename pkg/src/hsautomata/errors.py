"""Exception hierarchy shared by all modules."""


class HSError(Exception):
    """Base class for every error raised by hsautomata."""


class ParseError(HSError, ValueError):
    def __init__(self, message, symbol=None, position=None):
        super().__init__(message)
        self.symbol = symbol
        self.position = position


class AlphabetMismatch(HSError, ValueError):
    pass


class InfiniteIndex(HSError):
    """The folded graph is missing an edge, so the subgroup has infinite index."""

    def __init__(self, message, state=None, letter=None):
        super().__init__(message)
        self.state = state
        self.letter = letter


class EmptyGenerators(InfiniteIndex):
    pass


class NotIrreducible(HSError, ValueError):
    pass


class ZeroConstantTerm(HSError, ValueError):
    pass


class PeriodAbsent(HSError, ValueError):
    pass


class InvalidPartition(HSError, ValueError):
    pass


class BoundExceeded(HSError, ValueError):
    pass


class ResourceBound(HSError):
    pass
