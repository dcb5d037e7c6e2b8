"""Exception types shared across the pipeline, store, and query layers."""

from __future__ import annotations


class ChronolexError(Exception):
    """Base class for all errors raised by this package."""


class EmptyCorpus(ChronolexError):
    """Manifest lists no documents."""


class InfeasibleSlicing(ChronolexError):
    """Document years cannot be covered by slices within the span bounds."""


class EmptyVocabulary(ChronolexError):
    """No word survives the minimum-count threshold."""


class EmptySlice(ChronolexError):
    """Slice has zero tokens, so relative frequencies are undefined."""


class EmptyMatrix(ChronolexError):
    """Co-occurrence counts sum to zero, so PPMI is undefined."""


class InvalidDimension(ChronolexError):
    """Requested embedding dimension is outside [1, vocab_size]."""


class DimensionMismatch(ChronolexError):
    """Vectors of different lengths were combined."""


class UnknownWord(ChronolexError):
    """Queried word is not in the relevant vocabulary.

    Carries the offending word so callers can report which lookup failed.
    """

    def __init__(self, word: str, detail: str = ""):
        self.word = word
        msg = f"unknown word: {word!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnknownCorpus(ChronolexError):
    """Queried corpus id does not exist in the store."""

    def __init__(self, corpus_id: str):
        self.corpus_id = corpus_id
        super().__init__(f"unknown corpus: {corpus_id!r}")


class NoUsableSeeds(ChronolexError):
    """No seed word with positive similarity weight is available for a target."""


class ConsistencyError(ChronolexError):
    """Slice artifacts handed to the store disagree in shape or ids."""
