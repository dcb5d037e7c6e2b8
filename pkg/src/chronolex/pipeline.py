"""End-to-end build: manifest -> slices -> vocab -> cooc -> PPMI -> SVD -> store.

Each time slice runs the same stage chain independently (so slices can build in
parallel), and finished slices are committed to the store in slice order to
keep rebuilt store files byte-identical for identical configuration.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from chronolex import cooc as cooc_mod
from chronolex import corpus as corpus_mod
from chronolex import embed as embed_mod
from chronolex import emotion as emotion_mod
from chronolex.errors import ChronolexError
from chronolex.store import ModelStore, SliceArtifacts

logger = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    """Every tunable of the build, with explicit defaults.

    A JSON config file is the single source of hyperparameters; command-line
    flags override individual fields.
    """

    manifest: str = ""
    seed_lexicon: str = ""
    store: str = "model.store"
    window: int = 4
    min_count: int = 10
    d: int = 300
    alpha: float = 0.75
    p: float = 0.0
    svd_seed: int = 42
    top_k: int = 10
    context_k: int = 20
    min_seed_sim: float = 0.0
    strip_pattern: str = corpus_mod.DEFAULT_STRIP_PATTERN

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**raw)
        base = Path(path).parent
        for name in ("manifest", "seed_lexicon", "store"):
            value = getattr(cfg, name)
            if value:
                setattr(cfg, name, str((base / value) if not Path(value).is_absolute() else Path(value)))
        return cfg

    def validate(self) -> None:
        if not self.manifest:
            raise ValueError("config.manifest is required")
        if not self.seed_lexicon:
            raise ValueError("config.seed_lexicon is required")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError("alpha must lie in (0, 1]")
        if not (0.0 <= self.p <= 1.0):
            raise ValueError("p must lie in [0, 1]")
        if self.top_k < 1 or self.context_k < 1:
            raise ValueError("top_k and context_k must be >= 1")


class BuildError(ChronolexError):
    """A pipeline stage failed; carries the stage name and the original error."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r}: {type(cause).__name__}: {cause}")


@dataclass
class _SliceResult:
    slice_meta: corpus_mod.TimeSlice
    artifacts: SliceArtifacts
    timings: dict[str, float] = field(default_factory=dict)


def run_build(config: PipelineConfig, workers: int = 1) -> ModelStore:
    """Run the full pipeline and return the committed store."""
    config.validate()
    started = time.perf_counter()

    def stage(name: str):
        return _Stage(name)

    with stage("manifest") as s:
        manifest = corpus_mod.load_manifest(config.manifest)
        s.note(f"corpus {manifest.corpus_id!r} ({manifest.language}), "
               f"{len(manifest.documents)} documents")
    with stage("seed_lexicon") as s:
        seeds = emotion_mod.load_seed_lexicon(config.seed_lexicon, manifest.language)
        s.note(f"{len(seeds)} seed words")
    with stage("documents") as s:
        documents = corpus_mod.load_documents(manifest, config.strip_pattern)
        s.note(f"{sum(len(d.tokens) for d in documents)} tokens")
    with stage("slices") as s:
        slices = corpus_mod.build_slices(manifest, documents)
        s.note(", ".join(f"{t.start_year}-{t.end_year}:{t.token_count}" for t in slices))
    with stage("vocabulary") as s:
        slice_docs = [corpus_mod.docs_in_slice(t, documents) for t in slices]
        vocabs = [
            corpus_mod.build_vocabulary(
                (tok for doc in docs for tok in doc.tokens), config.min_count
            )
            for docs in slice_docs
        ]
        s.note(", ".join(f"slice {t.slice_id}:{len(v)}" for t, v in zip(slices, vocabs)))

    d_eff = min([config.d] + [len(v) for v in vocabs])
    if d_eff < config.d:
        logger.info("clamping d from %d to %d (smallest slice vocabulary)", config.d, d_eff)

    lemma_table = None
    if manifest.lemma_table_path is not None:
        lemma_table = corpus_mod.load_lemma_table(manifest.lemma_table_path)

    def build_one(i: int) -> _SliceResult:
        return _build_slice(
            slices[i], slice_docs[i], vocabs[i], seeds, config, d_eff
        )

    with stage("embed+emotion") as s:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(build_one, range(len(slices))))
        else:
            results = [build_one(i) for i in range(len(slices))]
        s.note(f"{len(results)} slices")

    with stage("store") as s:
        store_path = Path(config.store)
        if store_path.exists():
            store = ModelStore.load(store_path)
            store.path = store_path
        else:
            store = ModelStore(store_path)
        params = {
            "d": d_eff,
            "configured_d": config.d,
            "window": config.window,
            "min_count": config.min_count,
            "alpha": config.alpha,
            "p": config.p,
            "svd_seed": config.svd_seed,
            "top_k": config.top_k,
            "context_k": config.context_k,
            "min_seed_sim": config.min_seed_sim,
        }
        store.add_corpus(manifest.corpus_id, manifest.language, params, lemma_table)
        for result in sorted(results, key=lambda r: r.slice_meta.slice_id):
            receipt = store.write_slice(manifest.corpus_id, result.artifacts)
            timing = " ".join(f"{k}={v:.2f}s" for k, v in result.timings.items())
            logger.info(
                "slice %d (%d-%d): %d words committed (%s)",
                receipt.slice_id, result.slice_meta.start_year,
                result.slice_meta.end_year, receipt.word_count, timing,
            )
        s.note(f"{config.store}")

    logger.info("build finished in %.2fs", time.perf_counter() - started)
    return store


class _Stage:
    """Context manager that times a stage and attributes failures to it."""

    def __init__(self, name: str):
        self.name = name
        self._note = ""

    def note(self, text: str) -> None:
        self._note = text

    def __enter__(self) -> "_Stage":
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc is not None:
            if isinstance(exc, (ChronolexError, OSError, ValueError)) and not isinstance(
                exc, BuildError
            ):
                raise BuildError(self.name, exc) from exc
            return
        elapsed = time.perf_counter() - self._t0
        suffix = f" — {self._note}" if self._note else ""
        logger.info("stage %-14s %6.2fs%s", self.name, elapsed, suffix)


def _build_slice(
    slc: corpus_mod.TimeSlice,
    docs: list[corpus_mod.LoadedDocument],
    vocab: corpus_mod.Vocabulary,
    seeds: emotion_mod.SeedLexicon,
    config: PipelineConfig,
    d_eff: int,
) -> _SliceResult:
    timings: dict[str, float] = {}

    def timed(name: str, fn):
        t0 = time.perf_counter()
        out = fn()
        timings[name] = time.perf_counter() - t0
        return out

    counts = timed(
        "cooc",
        lambda: cooc_mod.count_cooccurrences((d.tokens for d in docs), vocab, config.window),
    )
    ppmi_matrix = timed("ppmi", lambda: embed_mod.ppmi(counts, config.alpha))
    model = timed(
        "svd",
        lambda: embed_mod.truncated_svd(
            ppmi_matrix,
            d_eff,
            config.p,
            config.svd_seed + slc.slice_id,
            vocab=vocab,
            slice_id=slc.slice_id,
        ),
    )
    if model.singular_values is not None:
        head = ", ".join(f"{v:.3f}" for v in model.singular_values[:5])
        logger.debug("slice %d singular value head: %s", slc.slice_id, head)

    # Everything downstream (caches, emotions, the store) sees the float32
    # vectors that will be persisted, so cached scores match later on-the-fly
    # recomputation from the store exactly.
    vectors32 = model.vectors.astype(np.float32)
    model.vectors = vectors32.astype(np.float64)

    def build_caches():
        top = {}
        ctx = {}
        for word_id, word in enumerate(vocab.words):
            ranked = embed_mod.top_k_similar(word, model, config.top_k, exclude_self=True)
            top[word_id] = [(vocab.id_of(w), score) for w, score in ranked]
            contexts = cooc_mod.typical_contexts(word, ppmi_matrix, vocab, config.context_k)
            ctx[word_id] = [(vocab.id_of(w), score) for w, score in contexts]
        return top, ctx

    top_similar, contexts = timed("cache", build_caches)
    induced = timed(
        "emotion",
        lambda: emotion_mod.induce_lexicon([model], seeds, vocab.words, config.min_seed_sim),
    )
    emotions = {
        vocab.id_of(word): score for (_, word), score in induced.items()
    }
    artifacts = SliceArtifacts(
        slice_meta=slc,
        vocabulary=vocab,
        vectors=vectors32,
        emotions=emotions,
        top_similar=top_similar,
        contexts=contexts,
    )
    return _SliceResult(slice_meta=slc, artifacts=artifacts, timings=timings)
