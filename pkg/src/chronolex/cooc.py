"""Symmetric windowed co-occurrence counts, relative frequencies, context rankings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from chronolex.corpus import TimeSlice, Vocabulary
from chronolex.errors import EmptySlice, UnknownWord

if TYPE_CHECKING:
    from chronolex.embed import PpmiMatrix


@dataclass
class SparseCooc:
    """Finalized co-occurrence counts: sorted (target, context, count) triples.

    Counts are symmetric (count(a,b) == count(b,a)) and total_pairs is the sum
    over both directions.
    """

    vocab_size: int
    triples: list[tuple[int, int, float]]
    total_pairs: float

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.triples:
            empty = np.empty(0)
            return empty.astype(np.int64), empty.astype(np.int64), empty
        t, c, n = zip(*self.triples)
        return np.asarray(t, dtype=np.int64), np.asarray(c, dtype=np.int64), np.asarray(n, dtype=np.float64)


def count_cooccurrences(
    documents: Iterable[Sequence[str]], vocab: Vocabulary, window: int
) -> SparseCooc:
    """Count symmetric window pairs with constant weighting.

    For every position i and offset 1 <= d <= window inside one document, both
    ordered pairs (w_i, w_{i+d}) and (w_{i+d}, w_i) are incremented by 1.
    Windows never cross document boundaries; out-of-vocabulary tokens occupy
    positions but contribute no pairs.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    size = len(vocab)
    index = vocab.index
    acc: dict[int, int] = {}
    for tokens in documents:
        ids = np.fromiter(
            (index.get(tok, -1) for tok in tokens), dtype=np.int64, count=len(tokens)
        )
        n = ids.shape[0]
        for d in range(1, window + 1):
            if n <= d:
                break
            left = ids[:-d]
            right = ids[d:]
            mask = (left >= 0) & (right >= 0)
            if not mask.any():
                continue
            a = left[mask]
            b = right[mask]
            keys = np.concatenate([a * size + b, b * size + a])
            uniq, counts = np.unique(keys, return_counts=True)
            for key, cnt in zip(uniq.tolist(), counts.tolist()):
                acc[key] = acc.get(key, 0) + cnt
    triples = [
        (key // size, key % size, float(cnt)) for key, cnt in sorted(acc.items())
    ]
    total = float(sum(cnt for _, _, cnt in triples))
    return SparseCooc(vocab_size=size, triples=triples, total_pairs=total)


def relative_frequency(vocab: Vocabulary, slc: TimeSlice) -> dict[str, float]:
    """Per-word relative frequency against the slice's full (unfiltered) token mass."""
    if slc.token_count == 0:
        raise EmptySlice(f"slice {slc.slice_id} has no tokens")
    return {word: count / slc.token_count for word, count in vocab.items()}


def typical_contexts(
    word: str, ppmi: "PpmiMatrix", vocab: Vocabulary, k: int
) -> list[tuple[str, float]]:
    """Top-k context words for a target, ranked by PPMI score.

    Descending score, ties broken lexicographically; rows with fewer than k
    positive entries return fewer results.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if word not in vocab:
        raise UnknownWord(word, "not in slice vocabulary")
    ids, values = ppmi.row(vocab.id_of(word))
    scored = [(vocab.word_of(int(i)), float(v)) for i, v in zip(ids, values)]
    scored.sort(key=lambda ws: (-ws[1], ws[0]))
    return scored[:k]
