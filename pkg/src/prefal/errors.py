"""Exception hierarchy shared by every prefal module."""


class PrefalError(Exception):
    """Base class for all library errors."""


class SpecError(PrefalError, ValueError):
    """A word, coloring or Sturmian spec failed to parse or validate."""


class GenerationError(PrefalError):
    """An infinite word could not produce the requested prefix."""


class StallError(GenerationError):
    """Greedy factorization found no unbordered prefix matching at a position."""

    def __init__(self, position: int):
        super().__init__(f"factorization stalls at position {position}")
        self.position = position


class DecodeError(PrefalError):
    """A code table failed to decode, or decoded ambiguously."""


class NotSturmianError(PrefalError):
    """The word is not Sturmian (or the test bound cannot tell)."""


class CrossCheckError(PrefalError):
    """Two independent routes disagreed; indicates a bug, not bad input."""
