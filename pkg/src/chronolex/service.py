"""REST API over a loaded model store.

Every endpoint returns the same JSON envelope:

    {"corpus": ..., "words": [...], "curves": [{"name": ..., "points":
     [{"x": <slice label year>, "y": <value>}]}], "meta": {...}}

Points are omitted where data is missing (never null, never NaN), x values are
strictly increasing slice label years, and query words are normalized exactly
like corpus tokens before lookup. Unknown words or corpora yield 404 responses
that name the offender.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from chronolex.emotion import zscale_series
from chronolex.errors import UnknownCorpus, UnknownWord
from chronolex.store import ModelStore

RAW = "raw"
ZSCORED = "zscored"


def _points(pairs: Iterable[tuple[int, float]]) -> list[dict]:
    return [
        {"x": x, "y": float(y)}
        for x, y in pairs
        if math.isfinite(float(y))
    ]


def _curve(name: str, pairs: Iterable[tuple[int, float]]) -> dict:
    return {"name": name, "points": _points(pairs)}


def create_app(store: ModelStore, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="chronolex", description="diachronic word meaning and emotion API")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    def normalized(corpus: str, word: str) -> str:
        try:
            return store.normalize_query(corpus, word)
        except UnknownCorpus as exc:
            raise HTTPException(404, detail={"error": "UnknownCorpus", "corpus": exc.corpus_id})

    def envelope(corpus: str, words: list[str], curves: list[dict], **meta) -> dict:
        base_meta = {"scale": None, "k": None, "d": store.params(corpus).get("d")}
        base_meta.update(meta)
        return {"corpus": corpus, "words": words, "curves": curves, "meta": base_meta}

    def run(corpus: str, fn):
        """Translate domain errors into 404s that name the offender."""
        try:
            return fn()
        except UnknownCorpus as exc:
            raise HTTPException(404, detail={"error": "UnknownCorpus", "corpus": exc.corpus_id})
        except UnknownWord as exc:
            raise HTTPException(404, detail={"error": "UnknownWord", "word": exc.word})

    @app.get("/api/corpora")
    def corpora() -> list[dict]:
        out = []
        for corpus_id in store.corpora():
            out.append(
                {
                    "corpus_id": corpus_id,
                    "language": store.language(corpus_id),
                    "slices": [
                        {"label": s.label_year, "start_year": s.start_year, "end_year": s.end_year}
                        for s in store.slices(corpus_id)
                    ],
                }
            )
        return out

    @app.get("/api/similarity")
    def similarity(corpus: str, word1: str, word2: str) -> dict:
        w1 = normalized(corpus, word1)
        w2 = normalized(corpus, word2)
        series = run(corpus, lambda: store.similarity_on_the_fly(corpus, w1, w2))
        curve = _curve(f"{w1}:{w2}", ((slc.label_year, value) for slc, value in series))
        return envelope(corpus, [w1, w2], [curve])

    @app.get("/api/emotion")
    def emotion(
        corpus: str, word: str, scale: str = Query(RAW, pattern=f"^({RAW}|{ZSCORED})$")
    ) -> dict:
        w = normalized(corpus, word)
        series = run(corpus, lambda: store.emotion_series(corpus, w))
        labels = [slc.label_year for slc, _ in series]
        dims = {
            "valence": [vad.valence for _, vad in series],
            "arousal": [vad.arousal for _, vad in series],
            "dominance": [vad.dominance for _, vad in series],
        }
        if scale == ZSCORED:
            dims = {name: (zscale_series(vals) if vals else []) for name, vals in dims.items()}
        curves = [_curve(name, zip(labels, vals)) for name, vals in dims.items()]
        return envelope(corpus, [w], curves, scale=scale)

    @app.get("/api/frequency")
    def frequency(corpus: str, word: str) -> dict:
        w = normalized(corpus, word)
        series = run(corpus, lambda: store.frequency_series(corpus, w))
        curve = _curve("frequency", ((slc.label_year, value) for slc, value in series))
        return envelope(corpus, [w], [curve])

    @app.get("/api/typicalcontext")
    def typicalcontext(corpus: str, word: str, k: int | None = Query(None, ge=1)) -> dict:
        w = normalized(corpus, word)
        limit = k if k is not None else store.params(corpus).get("context_k")
        series = run(corpus, lambda: store.context_series(corpus, w, limit))
        by_context: dict[str, list[tuple[int, float]]] = {}
        for slc, ranked in series:
            for context_word, score in ranked:
                by_context.setdefault(context_word, []).append((slc.label_year, score))
        curves = [_curve(name, pairs) for name, pairs in sorted(by_context.items())]
        return envelope(corpus, [w], curves, k=limit)

    @app.get("/api/mostsimilar")
    def mostsimilar(corpus: str, word: str, k: int | None = Query(None, ge=1)) -> dict:
        w = normalized(corpus, word)
        limit = k if k is not None else store.params(corpus).get("top_k")
        ranked = run(corpus, lambda: store.get_reference_words(corpus, w, limit))
        body = envelope(corpus, [w], [], k=limit)
        body["ranking"] = [{"word": name, "score": score} for name, score in ranked]
        return body

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
