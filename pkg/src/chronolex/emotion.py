"""Valence-Arousal-Dominance induction from embeddings and a seed lexicon.

A word's emotion in one time slice is the similarity-weighted mean of the seed
ratings, using cosine similarity in that slice's embedding space as the weight.
Only strictly positive weights participate, so every induced value stays inside
the seed scale.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from chronolex.embed import EmbeddingModel, cosine_to_all
from chronolex.errors import NoUsableSeeds, UnknownWord

logger = logging.getLogger(__name__)

SEED_CSV_FIELDS = ("word", "valence", "arousal", "dominance")


@dataclass(frozen=True)
class VadScore:
    valence: float
    arousal: float
    dominance: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.valence, self.arousal, self.dominance)


@dataclass
class SeedLexicon:
    """Human-rated word -> VAD anchors on a fixed numeric scale."""

    language: str
    entries: dict[str, VadScore]
    scale_min: float = 1.0
    scale_max: float = 9.0

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("seed lexicon must not be empty")
        for word, score in self.entries.items():
            for value in score.as_tuple():
                if not (self.scale_min <= value <= self.scale_max):
                    raise ValueError(
                        f"seed {word!r} rating {value} outside "
                        f"[{self.scale_min}, {self.scale_max}]"
                    )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries


def load_seed_lexicon(path: str, language: str = "english") -> SeedLexicon:
    """Load a seed CSV with header word,valence,arousal,dominance on a [1,9] scale."""
    entries: dict[str, VadScore] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        missing = set(SEED_CSV_FIELDS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"seed lexicon missing columns: {sorted(missing)}")
        for row in reader:
            entries[row["word"]] = VadScore(
                valence=float(row["valence"]),
                arousal=float(row["arousal"]),
                dominance=float(row["dominance"]),
            )
    return SeedLexicon(language=language, entries=entries)


def similarity_weighted_mean(weights: np.ndarray, ratings: np.ndarray) -> np.ndarray:
    """Normalized weighted mean per rating dimension.

    Invariant under positive rescaling of the weights and under permuting the
    (weight, rating) pairs; with positive weights the result stays inside the
    per-dimension rating range.
    """
    weights = np.asarray(weights, dtype=np.float64)
    ratings = np.asarray(ratings, dtype=np.float64)
    # normalizing first keeps the single-seed case exact: w/w == 1.0
    return (weights / weights.sum()) @ ratings


def induce_emotion(
    word: str,
    model: EmbeddingModel,
    seeds: SeedLexicon,
    min_seed_sim: float = 0.0,
) -> VadScore:
    """Similarity-weighted mean of seed ratings, per dimension.

    The effective seed set keeps seeds that are in the slice vocabulary, are
    not the target itself, and have cosine similarity strictly above
    min_seed_sim. Raises NoUsableSeeds when that set is empty so callers render
    a gap instead of a fabricated value.
    """
    if model.vocab is None or word not in model.vocab:
        raise UnknownWord(word, f"not in slice {model.slice_id} vocabulary")
    vocab = model.vocab
    seed_words = [s for s in seeds.entries if s in vocab and s != word]
    if not seed_words:
        raise NoUsableSeeds(f"no seed word in slice {model.slice_id} vocabulary")
    seed_ids = np.array([vocab.id_of(s) for s in seed_words])
    sims = cosine_to_all(model.vectors[seed_ids], model.vectors[vocab.id_of(word)])
    usable = sims > min_seed_sim
    if not usable.any():
        raise NoUsableSeeds(
            f"no seed with similarity above {min_seed_sim} for {word!r} "
            f"in slice {model.slice_id}"
        )
    weights = sims[usable]
    ratings = np.array(
        [seeds.entries[s].as_tuple() for s, keep in zip(seed_words, usable) if keep]
    )
    induced = similarity_weighted_mean(weights, ratings)
    return VadScore(valence=float(induced[0]), arousal=float(induced[1]), dominance=float(induced[2]))


def induce_lexicon(
    models: Iterable[EmbeddingModel],
    seeds: SeedLexicon,
    targets: Iterable[str],
    min_seed_sim: float = 0.0,
) -> dict[tuple[int, str], VadScore]:
    """Induce VAD for every (slice, target) pair, independently per slice.

    Pairs whose target is absent from a slice vocabulary, or that end up with
    no usable seeds, are omitted (and logged), never interpolated.
    """
    targets = list(targets)
    induced: dict[tuple[int, str], VadScore] = {}
    for model in models:
        for word in targets:
            if word not in model:
                continue
            try:
                induced[(model.slice_id, word)] = induce_emotion(
                    word, model, seeds, min_seed_sim
                )
            except NoUsableSeeds as exc:
                logger.info("skipping (slice %d, %r): %s", model.slice_id, word, exc)
    return induced


def zscale_series(values: Iterable[float]) -> list[float]:
    """Center and scale to mean 0 / population std 1; constant input maps to zeros."""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot scale an empty series")
    centered = arr - arr.mean()
    # second pass removes the cancellation residue left when the mean is
    # orders of magnitude larger than the spread
    centered -= centered.mean()
    scale = np.abs(centered).max()
    if scale == 0.0:
        return [0.0] * arr.size
    # pre-scaling keeps the squares inside normal float range (the result is
    # scale-invariant, so this changes nothing mathematically)
    unit = centered / scale
    std = unit.std()
    if std == 0.0:
        return [0.0] * arr.size
    return (unit / std).tolist()


def export_induced_csv(
    path: str, induced: Mapping[tuple[int, str], VadScore]
) -> None:
    """Write induced scores as word,slice,valence,arousal,dominance rows."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["word", "slice", "valence", "arousal", "dominance"])
        for (slice_id, word) in sorted(induced, key=lambda key: (key[1], key[0])):
            score = induced[(slice_id, word)]
            writer.writerow([word, slice_id, score.valence, score.arousal, score.dominance])
