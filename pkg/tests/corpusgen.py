"""Synthetic corpora for tests: structured token streams with known emotion geometry.

The generated text mixes three word classes: filler words, a target word, and
two seed groups (high and low valence/dominance). Target sentences place the
target next to seed words, so its vector lands near them; background sentences
keep every seed above the count threshold in every slice.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

HIGH_SEEDS = ["bliss", "cheer", "glee", "joy", "pride"]
LOW_SEEDS = ["dread", "fear", "gloom", "grief", "woe"]
FILLERS = [f"w{i:02d}" for i in range(40)]
TARGET = "ember"

# (word, valence, arousal, dominance) on the [1, 9] scale
SEED_ROWS = [(w, 8.0, 5.0, 8.0) for w in HIGH_SEEDS] + [(w, 2.0, 5.0, 2.0) for w in LOW_SEEDS]


def write_seed_csv(path: Path, rows=SEED_ROWS) -> Path:
    lines = ["word,valence,arousal,dominance"]
    lines += [f"{w},{v},{a},{d}" for w, v, a, d in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_manifest(
    directory: Path,
    corpus_id: str,
    language: str,
    slicing: dict,
    docs: list[tuple[int, str]],
    lemma_rows: list[tuple[str, str]] | None = None,
) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    doc_entries = []
    for i, (year, text) in enumerate(docs):
        name = f"doc_{i:03d}_{year}.txt"
        (directory / name).write_text(text, encoding="utf-8")
        doc_entries.append({"year": year, "path": name})
    manifest = {
        "corpus_id": corpus_id,
        "language": language,
        "slicing": slicing,
        "documents": doc_entries,
    }
    if lemma_rows is not None:
        (directory / "lemmas.tsv").write_text(
            "".join(f"{s}\t{l}\n" for s, l in lemma_rows), encoding="utf-8"
        )
        manifest["lemma_table"] = "lemmas.tsv"
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1), encoding="utf-8")
    return path


def slice_tokens(rng: random.Random, n_tokens: int, target_seeds: list[str]) -> list[str]:
    """One slice's token stream; the target co-occurs with target_seeds only.

    Target sentences interleave seeds with the same filler frames the seeds see
    in background sentences, so target/seed similarity is first- and
    second-order at once.
    """
    all_seeds = HIGH_SEEDS + LOW_SEEDS
    out: list[str] = []
    while len(out) < n_tokens:
        r = rng.random()
        if r < 0.12:
            frame = rng.choice(FILLERS[:8])
            sent = [
                frame,
                rng.choice(target_seeds),
                TARGET,
                rng.choice(target_seeds),
                frame,
                rng.choice(target_seeds),
            ]
        elif r < 0.30:
            seed = rng.choice(all_seeds)
            frame = rng.choice(FILLERS[:8])
            sent = [frame, seed, rng.choice(FILLERS), seed, frame]
        else:
            sent = [rng.choice(FILLERS) for _ in range(8)]
        out.extend(sent)
    return out[:n_tokens]


def demo_corpus(directory: Path, seed: int = 7, tokens_per_slice: int = 12_000) -> tuple[Path, Path]:
    """Three-decade corpus where the target tracks both seed groups equally."""
    rng = random.Random(seed)
    mixed = HIGH_SEEDS + LOW_SEEDS
    docs = []
    for year in (1830, 1835, 1840, 1845, 1850, 1855):
        toks = slice_tokens(rng, tokens_per_slice // 2, mixed)
        docs.append((year, " ".join(toks)))
    manifest = write_manifest(
        directory, "demo", "english", {"mode": "fixed_span", "span_years": 10}, docs
    )
    seeds_csv = write_seed_csv(directory / "seeds.csv")
    return manifest, seeds_csv


def shift_corpus(
    directory: Path, seed: int = 11, tokens_per_slice: int = 200_000
) -> tuple[Path, Path]:
    """Two-slice corpus where the target moves from high to low seed company."""
    rng = random.Random(seed)
    docs = []
    for year in (1900, 1905, 1910, 1915):
        docs.append((year, " ".join(slice_tokens(rng, tokens_per_slice // 4, HIGH_SEEDS))))
    for year in (1920, 1925, 1930, 1935):
        docs.append((year, " ".join(slice_tokens(rng, tokens_per_slice // 4, LOW_SEEDS))))
    manifest = write_manifest(
        directory, "shift", "english", {"mode": "fixed_span", "span_years": 20}, docs
    )
    seeds_csv = write_seed_csv(directory / "seeds.csv")
    return manifest, seeds_csv
