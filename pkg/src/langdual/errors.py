"""Exception types shared across the package."""


class LangdualError(Exception):
    """Base class for all library errors."""


class RegexSyntaxError(LangdualError):
    """Malformed regular-expression text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(LangdualError):
    """A symbol outside the declared alphabet."""

    def __init__(self, symbol: str):
        super().__init__(f"symbol {symbol!r} is not in the alphabet")
        self.symbol = symbol


class ResourceExceededError(LangdualError):
    """A construction passed its configured state or carrier cap."""


class TagMismatchError(LangdualError):
    """Objects of incompatible variety tags were combined."""


class NonFunctionalError(LangdualError):
    """A dual map characterization failed; the input morphism is invalid."""


class NotReachableError(LangdualError):
    """An algebra with an initial state is not generated by it."""


class NotRqcClosedError(LangdualError):
    """A subcoalgebra is not closed under right derivatives."""


class CorrespondenceError(LangdualError):
    """A round trip failed; carries the first one-sided language found."""

    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
