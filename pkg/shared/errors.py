from typing import Optional


class SocialEUError(Exception):
    """Base error. `source` names the file or field the problem came from."""

    def __init__(self, reason: str = None, source: Optional[str] = None):
        self.reason = reason or self.__class__.__name__
        self.source = source
        super().__init__(self.reason)

    def with_source(self, source: str) -> "SocialEUError":
        if self.source is None:
            self.source = source
        return self

    def diagnostic(self) -> str:
        """One-line message for standard error."""
        if self.source:
            return f"error: {self.source}: {self.reason}"
        return f"error: {self.reason}"


class ParseError(SocialEUError, ValueError):
    pass


class DimensionMismatch(SocialEUError, ValueError):
    def __init__(self, expected, actual, what: str = "profile", source: Optional[str] = None):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} has shape {actual}, expected {expected}", source)


class EmptyVector(SocialEUError, ValueError):
    def __init__(self, source: Optional[str] = None):
        super().__init__("weight vector is empty", source)


class NegativeWeight(SocialEUError, ValueError):
    def __init__(self, index: int, value: float, source: Optional[str] = None):
        self.index = index
        self.value = value
        super().__init__(f"weight {index} is negative ({value})", source)


class ZeroMass(SocialEUError, ValueError):
    def __init__(self, source: Optional[str] = None):
        super().__init__("weights sum to zero", source)


class IndexOutOfRange(SocialEUError, IndexError):
    def __init__(self, index: int, size: int, side: str = "row", source: Optional[str] = None):
        self.index = index
        self.size = size
        super().__init__(f"{side} index {index} out of range for {size} strategies", source)


class NonPositiveScale(SocialEUError, ValueError):
    def __init__(self, scale: float, source: Optional[str] = None):
        self.scale = scale
        super().__init__(f"affine scale must be > 0, got {scale}", source)


class InvalidParameter(SocialEUError, ValueError):
    pass


class GameUtilityNotEU(SocialEUError):
    """The game utility fails the expected-utility check the construction assumes."""

    def __init__(self, verdict=None, source: Optional[str] = None):
        self.verdict = verdict
        detail = ""
        if verdict is not None:
            detail = f" (max deviation {verdict.max_deviation:.3e} > tolerance {verdict.config.tolerance:.1e})"
        super().__init__(f"game utility is not an expected utility function{detail}", source)


class FixtureAssertionFailed(SocialEUError):
    def __init__(self, quantity: str, expected: float, actual: float):
        self.quantity = quantity
        self.expected = expected
        self.actual = actual
        super().__init__(f"{quantity}: expected {expected!r}, got {actual!r}", "paper-fixture")
