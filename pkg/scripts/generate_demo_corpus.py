#!/usr/bin/env python3
"""Generate a small synthetic demo corpus, seed lexicon, and build config.

Usage:
    python3 scripts/generate_demo_corpus.py demo/

Then build and explore:
    chronolex build --config demo/config.json
    chronolex query --store demo/demo.store neighbors ember
    chronolex serve --store demo/demo.store
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

HIGH = ["bliss", "cheer", "glee", "joy", "pride"]
LOW = ["dread", "fear", "gloom", "grief", "woe"]
FILLERS = [f"w{i:02d}" for i in range(40)]
TARGET = "ember"


def slice_text(rng: random.Random, n_tokens: int, target_seeds: list[str]) -> str:
    out: list[str] = []
    while len(out) < n_tokens:
        r = rng.random()
        if r < 0.12:
            frame = rng.choice(FILLERS[:8])
            out += [frame, rng.choice(target_seeds), TARGET, rng.choice(target_seeds), frame]
        elif r < 0.30:
            seed = rng.choice(HIGH + LOW)
            out += [rng.choice(FILLERS), seed, rng.choice(FILLERS), seed]
        else:
            out += [rng.choice(FILLERS) for _ in range(8)]
    return " ".join(out[:n_tokens])


def main() -> int:
    if len(sys.argv) != 2:
        print(__doc__)
        return 2
    root = Path(sys.argv[1])
    root.mkdir(parents=True, exist_ok=True)
    rng = random.Random(7)

    documents = []
    # the target drifts from high-valence to low-valence company over time
    for year, seeds in [(1830, HIGH), (1835, HIGH), (1840, HIGH + LOW), (1845, HIGH + LOW), (1850, LOW), (1855, LOW)]:
        name = f"doc_{year}.txt"
        (root / name).write_text(slice_text(rng, 30_000, seeds), encoding="utf-8")
        documents.append({"year": year, "path": name})

    (root / "manifest.json").write_text(
        json.dumps(
            {
                "corpus_id": "demo",
                "language": "english",
                "slicing": {"mode": "fixed_span", "span_years": 10},
                "documents": documents,
            },
            indent=1,
        ),
        encoding="utf-8",
    )
    rows = [f"{w},8.0,5.0,8.0" for w in HIGH] + [f"{w},2.0,5.0,2.0" for w in LOW]
    (root / "seeds.csv").write_text(
        "word,valence,arousal,dominance\n" + "\n".join(rows) + "\n", encoding="utf-8"
    )
    (root / "config.json").write_text(
        json.dumps(
            {
                "manifest": "manifest.json",
                "seed_lexicon": "seeds.csv",
                "store": "demo.store",
                "d": 20,
                "p": 0.5,
                "min_count": 5,
                "window": 4,
                "svd_seed": 13,
            },
            indent=1,
        ),
        encoding="utf-8",
    )
    print(f"wrote demo corpus under {root}/ (build with: chronolex build --config {root}/config.json)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
